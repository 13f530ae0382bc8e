#include "pslab/monotonicity.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sphere sums Σ_k w_k f(x0 + s ω_k) of the integrands the scan needs.
struct SphereSums {
  double grad_u = 0.0;
  double grad_v = 0.0;
  double coupling = 0.0;
  double mass = 0.0;
};

SphereSums sphere_sums(const SolutionPair& pair, const Point& x0, double s, const SphereQuadrature& quad) {
  const auto& nodes = quad.nodes();
  const auto& w = quad.weights();
  const double beta = pair.beta();
  std::vector<double> gu(nodes.size());
  std::vector<double> gv(nodes.size());
  std::vector<double> cp(nodes.size());
  std::vector<double> ms(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Point p = x0;
    for (int a = 0; a < quad.dim(); ++a) p[a] += s * nodes[k][a];
    const Sample q = sample_pair(pair, x0, p);
    gu[k] = w[k] * norm2(q.grad_u);
    gv[k] = w[k] * norm2(q.grad_v);
    cp[k] = w[k] * beta * q.u * q.u * q.v * q.v;
    ms[k] = w[k] * (q.u * q.u + q.v * q.v);
  }
  return {pairwise_sum(gu), pairwise_sum(gv), pairwise_sum(cp), pairwise_sum(ms)};
}

// Ball integrals of the same integrands, with plain (s^{N-1}) and kernel (s)
// radial weights, by the composite trapezoid rule over shells.
struct BallMoments {
  double grad_u = 0.0;
  double grad_v = 0.0;
  double coupling = 0.0;
  double mass = 0.0;
  double k_grad_u = 0.0;
  double k_grad_v = 0.0;
  double k_coupling = 0.0;
  double sphere_mass = 0.0;  // Σ w (u² + v²) on the outer sphere
};

BallMoments ball_moments(const SolutionPair& pair, const Point& x0, double r, const SphereQuadrature& quad,
                         int n_shells) {
  require_sphere_inside(pair.grid(), x0, r);
  const int dim = quad.dim();
  if (n_shells <= 0) n_shells = default_shell_count(pair.grid(), r);
  const auto shells = static_cast<std::size_t>(n_shells);
  std::vector<SphereSums> sums(shells + 1);
  const double ds = r / n_shells;
  parallel_for(shells + 1, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) {
      const double s = ds * static_cast<double>(j);
      if (j == 0 && dim > 1) continue;  // both radial weights vanish at s = 0
      sums[j] = sphere_sums(pair, x0, s, quad);
    }
  });
  std::vector<std::vector<double>> terms(7, std::vector<double>(shells + 1, 0.0));
  for (std::size_t j = 0; j <= shells; ++j) {
    const double s = ds * static_cast<double>(j);
    const double trap = (j == 0 || j == shells) ? 0.5 : 1.0;
    const double plain = trap * std::pow(s, dim - 1);
    const double kernel = trap * s;
    terms[0][j] = plain * sums[j].grad_u;
    terms[1][j] = plain * sums[j].grad_v;
    terms[2][j] = plain * sums[j].coupling;
    terms[3][j] = plain * sums[j].mass;
    terms[4][j] = kernel * sums[j].grad_u;
    terms[5][j] = kernel * sums[j].grad_v;
    terms[6][j] = kernel * sums[j].coupling;
  }
  BallMoments m;
  m.grad_u = ds * pairwise_sum(terms[0]);
  m.grad_v = ds * pairwise_sum(terms[1]);
  m.coupling = ds * pairwise_sum(terms[2]);
  m.mass = ds * pairwise_sum(terms[3]);
  m.k_grad_u = ds * pairwise_sum(terms[4]);
  m.k_grad_v = ds * pairwise_sum(terms[5]);
  m.k_coupling = ds * pairwise_sum(terms[6]);
  m.sphere_mass = sums[shells].mass;
  return m;
}

double acf_value(const BallMoments& m, double r) {
  return (m.k_grad_u + m.k_coupling) * (m.k_grad_v + m.k_coupling) / std::pow(r, 4);
}

double sphere_height(const SolutionPair& pair, const Point& x0, double r, const SphereQuadrature& quad) {
  require_sphere_inside(pair.grid(), x0, r);
  return sphere_sums(pair, x0, r, quad).mass;
}

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw ConfigError("empty radius list");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
      throw ConfigError(fmt::format("radius {} must be positive", radii[k]));
    }
    if (k > 0 && !(radii[k] > radii[k - 1])) throw ConfigError("radii must be strictly increasing");
  }
}

void check_center(const SolutionPair& pair, const Point& x0) {
  if (pair.grid().dim() < 2) throw ConfigError("frequency diagnostics need dimension 2 or 3");
  if (!pair.grid().contains(x0)) {
    throw DomainError(fmt::format("center ({}, {}, {}) lies outside the box", x0[0], x0[1], x0[2]));
  }
}

// Centered (or second-order one-sided) difference of H at r.
double height_derivative(const SolutionPair& pair, const Point& x0, double r, const SphereQuadrature& quad) {
  const GridSpec& g = pair.grid();
  const double h = g.h();
  const double rmax = g.max_radius(x0, h);
  const double step = std::max(0.05 * r, 2.0 * h);
  const double delta = std::min({step, rmax - r, 0.5 * r});
  if (delta >= 0.25 * h) {
    return (sphere_height(pair, x0, r + delta, quad) - sphere_height(pair, x0, r - delta, quad)) / (2.0 * delta);
  }
  const double d = std::min(step, 0.25 * r);
  return (3.0 * sphere_height(pair, x0, r, quad) - 4.0 * sphere_height(pair, x0, r - d, quad) +
          sphere_height(pair, x0, r - 2.0 * d, quad)) /
         (2.0 * d);
}

}  // namespace

const Verdict* MonotonicityReport::verdict(const std::string& name) const {
  for (const auto& v : verdicts) {
    if (v.name == name) return &v;
  }
  return nullptr;
}

bool MonotonicityReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

double MonotonicityReport::min_N() const {
  double m = std::numeric_limits<double>::infinity();
  for (double n : N) {
    if (!std::isnan(n)) m = std::min(m, n);
  }
  return m;
}

double MonotonicityReport::max_N() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double n : N) {
    if (!std::isnan(n)) m = std::max(m, n);
  }
  return m;
}

double height(const SolutionPair& pair, const Point& x0, double r) {
  return sphere_height(pair, x0, r, SphereQuadrature::standard(pair.grid().dim()));
}

MonotonicityReport almgren_scan(const SolutionPair& pair, const Point& x0, const std::vector<double>& radii,
                                const ScanOptions& opts) {
  check_center(pair, x0);
  check_radii(radii);
  const GridSpec& g = pair.grid();
  const int dim = g.dim();
  for (double r : radii) require_sphere_inside(g, x0, r);
  const SphereQuadrature quad = SphereQuadrature::standard(dim);

  MonotonicityReport rep;
  rep.x0 = x0;
  rep.dim = dim;
  rep.beta = pair.beta();
  rep.radii = radii;
  const std::size_t n = radii.size();
  rep.H.resize(n);
  rep.E.resize(n);
  rep.N.resize(n);
  rep.J.resize(n);
  rep.ball_mass.resize(n);
  rep.dH_identity.resize(n);
  rep.dH_numeric.assign(n, kNaN);
  rep.mass_growth_floor = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    const double r = radii[k];
    const BallMoments m = ball_moments(pair, x0, r, quad, opts.n_shells);
    const double H = m.sphere_mass;
    if (!(H > kMinH)) {
      throw DegenerateError(fmt::format("H({:.4g}) = {:.3e} at center ({}, {}, {}); the center is degenerate", r, H,
                                        x0[0], x0[1], x0[2]));
    }
    rep.H[k] = H;
    rep.E[k] = std::pow(r, 2 - dim) * (m.grad_u + m.grad_v + m.coupling);
    rep.N[k] = r < 4.0 * g.h() ? kNaN : rep.E[k] / H;
    rep.J[k] = acf_value(m, r);
    rep.ball_mass[k] = m.mass;
    rep.dH_identity[k] = 2.0 * std::pow(r, 1 - dim) * (m.grad_u + m.grad_v + 2.0 * m.coupling);
    rep.mass_growth_floor = std::min(rep.mass_growth_floor, m.mass / std::pow(r, dim + 2));
    if (opts.check_identity && !std::isnan(rep.N[k])) rep.dH_numeric[k] = height_derivative(pair, x0, r, quad);
  }

  // Frequency limit estimate from the outermost reported radius.
  rep.d_estimate = kNaN;
  for (std::size_t k = n; k-- > 0;) {
    if (!std::isnan(rep.N[k])) {
      rep.d_estimate = rep.N[k];
      break;
    }
  }
  if (!std::isnan(rep.d_estimate)) {
    rep.d_rounded = std::lround(rep.d_estimate);
    rep.d_distance = std::abs(rep.d_estimate - static_cast<double>(rep.d_rounded));
  }

  Verdict vn{"N_nondecreasing", true, 0.0, ""};
  Verdict vh{"H_nondecreasing", true, 0.0, ""};
  Verdict vi{"dH_identity", true, 0.0, ""};
  std::ptrdiff_t prev = -1;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const double drop = (rep.H[k - 1] - rep.H[k]) / rep.H[k - 1];
      if (drop > vh.max_violation) {
        vh.max_violation = drop;
        vh.detail = fmt::format("H drops by {:.3e} (relative) between r={:.4g} and r={:.4g}", drop, radii[k - 1],
                                radii[k]);
      }
    }
    if (std::isnan(rep.N[k])) continue;
    if (prev >= 0) {
      const double drop = rep.N[static_cast<std::size_t>(prev)] - rep.N[k];
      if (drop > vn.max_violation) {
        vn.max_violation = drop;
        vn.detail = fmt::format("N drops by {:.3e} between r={:.4g} and r={:.4g}", drop,
                                radii[static_cast<std::size_t>(prev)], radii[k]);
      }
    }
    prev = static_cast<std::ptrdiff_t>(k);
    if (opts.check_identity) {
      const double dev = std::abs(rep.dH_numeric[k] - rep.dH_identity[k]) / std::abs(rep.dH_identity[k]);
      if (!(dev <= vi.max_violation)) {
        vi.max_violation = dev;
        vi.detail = fmt::format("relative deviation {:.3e} at r={:.4g}", dev, radii[k]);
      }
    }
  }
  vn.pass = vn.max_violation <= opts.n_slack;
  vh.pass = vh.max_violation <= opts.h_slack;
  vi.pass = !opts.check_identity || vi.max_violation <= opts.identity_tol;
  if (!opts.check_identity) vi.detail = "skipped";
  rep.verdicts = {vn, vh, vi};
  return rep;
}

DoublingVerdict check_doubling(const MonotonicityReport& report, double d1, double d2) {
  constexpr double kPreSlack = 1e-2;
  constexpr double kSlack = 1e-3;
  if (d1 > d2) throw MisuseError(fmt::format("d1 = {} exceeds d2 = {}", d1, d2));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < report.radii.size(); ++k) {
    const double n = report.N[k];
    if (std::isnan(n)) continue;
    if (d1 > n + kPreSlack) {
      throw MisuseError(fmt::format("d1 = {} exceeds N = {:.6f} at r = {:.4g}", d1, n, report.radii[k]));
    }
    if (d2 < n - kPreSlack) {
      throw MisuseError(fmt::format("d2 = {} is below N = {:.6f} at r = {:.4g}", d2, n, report.radii[k]));
    }
    idx.push_back(k);
  }
  if (idx.size() < 2) throw InsufficientData("doubling check needs two radii with a reported N");

  DoublingVerdict out;
  out.d1 = d1;
  out.d2 = d2;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const double r1 = report.radii[idx[a]];
      const double r2 = report.radii[idx[b]];
      const double ratio = report.H[idx[b]] / report.H[idx[a]];
      const double lower = std::pow(r2 / r1, 2.0 * d1);
      const double upper = std::exp(d2) * std::pow(r2 / r1, 2.0 * d2);
      const double lower_margin = (ratio - lower) / lower;
      const double upper_margin = (upper - ratio) / upper;
      if (lower_margin < out.worst_margin) {
        out.worst_margin = lower_margin;
        out.worst_r1 = r1;
        out.worst_r2 = r2;
        out.worst_bound = "lower";
      }
      if (upper_margin < out.worst_margin) {
        out.worst_margin = upper_margin;
        out.worst_r1 = r1;
        out.worst_r2 = r2;
        out.worst_bound = "upper";
      }
    }
  }
  out.pass = out.worst_margin >= -kSlack;
  return out;
}

AcfReport acf_from_report(const MonotonicityReport& report) {
  constexpr double kSlack = 1e-3;
  AcfReport out;
  out.radii = report.radii;
  out.J = report.J;
  const std::size_t n = out.J.size();
  out.monotone.name = "acf_corrected_nondecreasing";

  double C = 0.0;
  bool infinite = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = out.J[k];
    const double b = out.J[k + 1];
    if (a <= 0.0) continue;  // 0 ≤ anything nonnegative
    if (b <= 0.0) {
      infinite = true;
      break;
    }
    const double gap = 1.0 / std::sqrt(out.radii[k]) - 1.0 / std::sqrt(out.radii[k + 1]);
    C = std::max(C, (std::log(a) - std::log(b)) / gap);
  }
  out.C = infinite ? std::numeric_limits<double>::infinity() : C;

  out.corrected.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.corrected[k] = infinite ? kNaN : std::exp(-out.C / std::sqrt(out.radii[k])) * out.J[k];
  }
  if (infinite) {
    out.monotone.pass = false;
    out.monotone.max_violation = std::numeric_limits<double>::infinity();
    out.monotone.detail = "J vanishes after being positive; no finite C exists";
  } else {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double scale = std::max(std::abs(out.corrected[k]), std::numeric_limits<double>::min());
      const double drop = (out.corrected[k] - out.corrected[k + 1]) / scale;
      if (drop > out.monotone.max_violation) {
        out.monotone.max_violation = drop;
        out.monotone.detail = fmt::format("corrected J drops by {:.3e} at r={:.4g}", drop, out.radii[k + 1]);
      }
    }
    out.monotone.pass = out.monotone.max_violation <= kSlack;
    out.monotone.detail = fmt::format("fitted C = {:.6g}{}", out.C,
                                      out.monotone.detail.empty() ? "" : "; " + out.monotone.detail);
  }

  double jmin = std::numeric_limits<double>::infinity();
  double jmax = 0.0;
  for (double j : out.J) {
    if (j > 0.0) {
      jmin = std::min(jmin, j);
      jmax = std::max(jmax, j);
    }
  }
  out.band_C4 = jmax > 0.0 ? std::max(jmax, 1.0 / jmin) : kNaN;
  return out;
}

AcfReport acf_scan(const SolutionPair& pair, const Point& x0, const std::vector<double>& radii,
                   const ScanOptions& opts) {
  ScanOptions o = opts;
  o.check_identity = false;
  check_center(pair, x0);
  check_radii(radii);
  // J itself does not need H > 0, so the scan runs without the degenerate guard.
  const SphereQuadrature quad = SphereQuadrature::standard(pair.grid().dim());
  MonotonicityReport rep;
  rep.radii = radii;
  for (double r : radii) {
    const BallMoments m = ball_moments(pair, x0, r, quad, o.n_shells);
    rep.J.push_back(acf_value(m, r));
  }
  return acf_from_report(rep);
}

double gamma_function(double t, int dim) {
  const double c = 0.5 * (dim - 2);
  return std::sqrt(c * c + t) - c;
}

RayleighResult spherical_rayleigh(const SolutionPair& pair, const Point& x0, double r) {
  check_center(pair, x0);
  const GridSpec& g = pair.grid();
  const int dim = g.dim();
  require_sphere_inside(g, x0, r);
  const SphereQuadrature quad = SphereQuadrature::standard(dim);
  const double beta = pair.beta();

  const auto& nodes = quad.nodes();
  const auto& w = quad.weights();
  std::vector<double> tu(nodes.size());
  std::vector<double> tv(nodes.size());
  std::vector<double> mu(nodes.size());
  std::vector<double> mv(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Point p = x0;
    for (int a = 0; a < dim; ++a) p[a] += r * nodes[k][a];
    const Sample s = sample_pair(pair, x0, p);
    const double du = dot(s.grad_u, s.normal);
    const double dv = dot(s.grad_v, s.normal);
    const double coupling = beta * s.u * s.u * s.v * s.v;
    tu[k] = w[k] * (std::max(0.0, norm2(s.grad_u) - du * du) + coupling);
    tv[k] = w[k] * (std::max(0.0, norm2(s.grad_v) - dv * dv) + coupling);
    mu[k] = w[k] * s.u * s.u;
    mv[k] = w[k] * s.v * s.v;
  }
  // Common factor r^{N-1} cancels in the quotients; the guard uses true integrals.
  const double area = std::pow(r, dim - 1);
  const double den_u = pairwise_sum(mu);
  const double den_v = pairwise_sum(mv);
  if (!(area * den_u > kMinH) || !(area * den_v > kMinH)) {
    throw DegenerateError(fmt::format("a component vanishes on the sphere of radius {:.4g} (∫u² = {:.3e}, ∫v² = {:.3e})",
                                      r, area * den_u, area * den_v));
  }
  RayleighResult out;
  out.Lambda1 = r * r * pairwise_sum(tu) / den_u;
  out.Lambda2 = r * r * pairwise_sum(tv) / den_v;
  out.gamma_sum = gamma_function(out.Lambda1, dim) + gamma_function(out.Lambda2, dim);
  out.lower_bound = (-4.0 + 2.0 * out.gamma_sum) / r;

  const double h = g.h();
  const double rmax = g.max_radius(x0, h);
  const double delta = std::min({std::max(0.05 * r, 2.0 * h), rmax - r, 0.5 * r});
  if (delta >= 0.25 * h) {
    const double jp = acf_value(ball_moments(pair, x0, r + delta, quad, 0), r + delta);
    const double jm = acf_value(ball_moments(pair, x0, r - delta, quad, 0), r - delta);
    out.dlogJ = (jp > 0.0 && jm > 0.0) ? (std::log(jp) - std::log(jm)) / (2.0 * delta) : kNaN;
  } else {
    const double d = std::min(std::max(0.05 * r, 2.0 * h), 0.25 * r);
    const double j0 = acf_value(ball_moments(pair, x0, r, quad, 0), r);
    const double j1 = acf_value(ball_moments(pair, x0, r - d, quad, 0), r - d);
    const double j2 = acf_value(ball_moments(pair, x0, r - 2.0 * d, quad, 0), r - 2.0 * d);
    out.dlogJ = (j0 > 0.0 && j1 > 0.0 && j2 > 0.0)
                    ? (3.0 * std::log(j0) - 4.0 * std::log(j1) + std::log(j2)) / (2.0 * d)
                    : kNaN;
  }
  out.inequality_holds = !std::isnan(out.dlogJ) && out.dlogJ >= out.lower_bound - 2e-2 / r;
  return out;
}

GammaConstant gamma_constant(int dim) {
  if (dim != 2 && dim != 3) throw ConfigError(fmt::format("gamma constant needs dim 2 or 3, got {}", dim));
  const SphereQuadrature quad = SphereQuadrature::standard(dim);
  std::vector<double> terms(quad.size());
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double xn = quad.nodes()[k][static_cast<std::size_t>(dim - 1)];
    terms[k] = quad.weights()[k] * xn * xn;
  }
  GammaConstant out;
  out.dim = dim;
  out.second_moment = pairwise_sum(terms);
  out.closed_form = unit_sphere_measure(dim) / dim;
  out.gamma = 1.0 / std::sqrt(out.second_moment);
  return out;
}

GridSpec blowdown_grid(int dim, int n) { return GridSpec::cube(dim, -1.0, 1.0, n); }

BlowdownResult blow_down(const SolutionPair& pair, const Point& x0, double R, const GridSpec& ref_grid) {
  check_center(pair, x0);
  const GridSpec& src = pair.grid();
  const int dim = src.dim();
  if (ref_grid.dim() != dim) throw ConfigError("reference grid dimension differs from the field");
  for (int a = 0; a < dim; ++a) {
    if (ref_grid.lo(a) > -1.0 + 1e-12 || ref_grid.hi(a) < 1.0 - 1e-12) {
      throw ConfigError("reference grid must contain the unit ball");
    }
  }
  if (!(R > 0.0)) throw ConfigError(fmt::format("blow-down radius must be positive, got {}", R));
  const double H = height(pair, x0, R);
  if (!(H > kMinH)) throw DegenerateError(fmt::format("H(R={:.4g}) = {:.3e} is degenerate", R, H));
  const double scale = 1.0 / std::sqrt(H);
  const double gamma = gamma_constant(dim).gamma;

  std::vector<double> u(ref_grid.size());
  std::vector<double> v(ref_grid.size());
  std::vector<double> eu(ref_grid.size(), 0.0);
  std::vector<double> ev(ref_grid.size(), 0.0);
  std::vector<char> in_ball(ref_grid.size(), 0);
  parallel_for(ref_grid.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Point x = ref_grid.node(i);
      Point y{};
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        y[a] = std::clamp(x0[a] + R * x[a], src.lo(a), src.hi(a));
        r2 += x[a] * x[a];
      }
      u[i] = scale * interpolate(pair.u(), y);
      v[i] = scale * interpolate(pair.v(), y);
      if (r2 <= 1.0 + 1e-12) {
        const double xn = x[static_cast<std::size_t>(dim - 1)];
        in_ball[i] = 1;
        eu[i] = u[i] - gamma * std::max(0.0, xn);
        ev[i] = v[i] - gamma * std::max(0.0, -xn);
      }
    }
  });

  BlowdownReport rep;
  rep.x0 = x0;
  rep.R = R;
  rep.H_value = H;
  rep.ratio = std::sqrt(H) / R;
  rep.beta_rescaled = pair.beta() * H * R * R;
  const double hr = ref_grid.h();
  const double cell = std::pow(hr, dim);
  std::vector<double> l2(ref_grid.size(), 0.0);
  std::vector<double> grad(ref_grid.size(), 0.0);
  double sup = 0.0;
  for (std::size_t i = 0; i < ref_grid.size(); ++i) {
    if (!in_ball[i]) continue;
    sup = std::max({sup, std::abs(eu[i]), std::abs(ev[i])});
    l2[i] = eu[i] * eu[i] + ev[i] * ev[i];
    const Index3 ijk = ref_grid.multi_index(i);
    for (int a = 0; a < dim; ++a) {
      if (ijk[a] + 1 >= ref_grid.n(a)) continue;
      const std::size_t j = i + ref_grid.stride(a);
      if (!in_ball[j]) continue;
      const double gu = (eu[j] - eu[i]) / hr;
      const double gv = (ev[j] - ev[i]) / hr;
      grad[i] += gu * gu + gv * gv;
    }
  }
  rep.sup_distance = sup;
  rep.H1_distance = std::sqrt(cell * (pairwise_sum(l2) + pairwise_sum(grad)));

  BlowdownResult out;
  out.pair = SolutionPair(ScalarField(ref_grid, std::move(u)), ScalarField(ref_grid, std::move(v)),
                          rep.beta_rescaled);
  out.report = rep;
  return out;
}

GrowthEstimate growth_exponent(const MonotonicityReport& report, double tolerance) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < report.radii.size(); ++k) {
    if (report.H[k] > 0.0) {
      lx.push_back(std::log(report.radii[k]));
      ly.push_back(std::log(report.H[k]));
    }
  }
  if (lx.size() < 4) throw InsufficientData("growth exponent needs at least 4 radii with H > 0");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  GrowthEstimate out;
  out.p_estimate = 0.5 * sxy / sxx;
  double sum = 0.0;
  int count = 0;
  for (double v : report.N) {
    if (!std::isnan(v)) {
      sum += v;
      ++count;
    }
  }
  out.mean_N = count > 0 ? sum / count : kNaN;
  out.discrepancy = std::abs(out.p_estimate - out.mean_N);
  out.consistent = count > 0 && out.discrepancy <= tolerance;
  return out;
}

std::vector<double> linspace(double r0, double r1, int count) {
  if (count < 1) throw ConfigError("linspace needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = count == 1 ? r0 : r0 + (r1 - r0) * k / (count - 1);
  return out;
}

}  // namespace pslab
