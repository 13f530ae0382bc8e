#include "pslab/ode1d.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "pslab/error.hpp"

namespace pslab {
namespace {

constexpr double kPositivityFloor = 1e-14;
constexpr int kMaxHalvings = 30;
constexpr int kTailSweeps = 4;

struct Mat2 {
  double a, b, c, d;  // [[a, b], [c, d]]

  Mat2 inverse() const {
    const double det = a * d - b * c;
    return {d / det, -b / det, -c / det, a / det};
  }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 scaled(double s) const { return {a * s, b * s, c * s, d * s}; }
  std::array<double, 2> apply(const std::array<double, 2>& x) const {
    return {a * x[0] + b * x[1], c * x[0] + d * x[1]};
  }
};

void residual_vectors(std::span<const double> u, std::span<const double> v, double h, double beta,
                      std::vector<double>& ru, std::vector<double>& rv) {
  const std::size_t n = u.size();
  ru.assign(n, 0.0);
  rv.assign(n, 0.0);
  const double ih2 = 1.0 / (h * h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    ru[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * ih2 - beta * u[i] * v[i] * v[i];
    rv[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * ih2 - beta * u[i] * u[i] * v[i];
  }
}

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max({m, std::abs(a[i]), std::abs(b[i])});
  return m;
}

// Newton direction for the interior unknowns by block Thomas elimination.
void newton_direction(std::span<const double> u, std::span<const double> v, double h, double beta,
                      const std::vector<double>& ru, const std::vector<double>& rv,
                      std::vector<double>& du, std::vector<double>& dv) {
  const std::size_t n = u.size();
  const std::size_t m = n - 2;
  const double ih2 = 1.0 / (h * h);
  std::vector<Mat2> cprime(m);
  std::vector<std::array<double, 2>> dprime(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = k + 1;
    Mat2 diag{-2.0 * ih2 - beta * v[i] * v[i], -2.0 * beta * u[i] * v[i], -2.0 * beta * u[i] * v[i],
              -2.0 * ih2 - beta * u[i] * u[i]};
    std::array<double, 2> rhs{-ru[i], -rv[i]};
    if (k > 0) {
      diag = diag - cprime[k - 1].scaled(ih2);
      rhs[0] -= ih2 * dprime[k - 1][0];
      rhs[1] -= ih2 * dprime[k - 1][1];
    }
    const Mat2 inv = diag.inverse();
    cprime[k] = inv.scaled(ih2);
    dprime[k] = inv.apply(rhs);
  }
  du.assign(n, 0.0);
  dv.assign(n, 0.0);
  std::array<double, 2> next{0.0, 0.0};
  for (std::size_t k = m; k-- > 0;) {
    const auto corr = cprime[k].apply(next);
    next = {dprime[k][0] - corr[0], dprime[k][1] - corr[1]};
    du[k + 1] = next[0];
    dv[k + 1] = next[1];
  }
}

// Solves w'' = beta·c²·w on the interior with the end values of w kept.
// The matrix is an M-matrix, so positive data give a positive solution whose
// tiny tail values are resolved to relative rather than absolute accuracy.
void scalar_solve(std::vector<double>& w, std::span<const double> c, double h, double beta) {
  const std::size_t n = w.size();
  const double h2 = h * h;
  std::vector<double> cp(n, 0.0);
  std::vector<double> dp(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double diag = 2.0 + h2 * beta * c[i] * c[i] - (i > 1 ? cp[i - 1] : 0.0);
    const double rhs = (i == 1 ? w[0] : dp[i - 1]) + (i + 2 == n ? w[n - 1] : 0.0);
    cp[i] = 1.0 / diag;
    dp[i] = rhs / diag;
  }
  for (std::size_t i = n - 1; i-- > 1;) w[i] = dp[i] + (i + 2 < n ? cp[i] * w[i + 1] : 0.0);
}

}  // namespace

double heteroclinic_residual(std::span<const double> u, std::span<const double> v, double h, double beta) {
  std::vector<double> ru;
  std::vector<double> rv;
  residual_vectors(u, v, h, beta, ru, rv);
  return max_abs(ru, rv);
}

DirichletSolve1D solve_dirichlet_1d(std::vector<double> u0, std::vector<double> v0, double h, double beta,
                                    double tol, int max_iter) {
  if (u0.size() != v0.size() || u0.size() < 3) throw ConfigError("1D solve needs matching arrays of length >= 3");
  DirichletSolve1D out;
  out.u = std::move(u0);
  out.v = std::move(v0);
  std::vector<double> ru;
  std::vector<double> rv;
  std::vector<double> du;
  std::vector<double> dv;
  std::vector<double> history;
  residual_vectors(out.u, out.v, h, beta, ru, rv);
  double res = max_abs(ru, rv);
  history.push_back(res);
  const std::size_t n = out.u.size();
  std::vector<double> tu(n);
  std::vector<double> tv(n);
  std::vector<double> tru;
  std::vector<double> trv;

  auto try_step = [&](double alpha, int& clipped) {
    clipped = 0;
    for (std::size_t i = 0; i < n; ++i) {
      tu[i] = out.u[i] + alpha * du[i];
      tv[i] = out.v[i] + alpha * dv[i];
      if (i > 0 && i + 1 < n) {
        if (tu[i] < 0.0) { tu[i] = kPositivityFloor; ++clipped; }
        if (tv[i] < 0.0) { tv[i] = kPositivityFloor; ++clipped; }
      }
    }
    residual_vectors(tu, tv, h, beta, tru, trv);
    return max_abs(tru, trv);
  };
  auto accept = [&](double tres, int clipped) {
    out.u.swap(tu);
    out.v.swap(tv);
    ru.swap(tru);
    rv.swap(trv);
    res = tres;
    out.clipped_values += clipped;
  };

  // Rounding in the stencil limits the attainable residual to about
  // eps·max|w|/h²; stagnation below this level counts as convergence.
  auto roundoff_floor = [&] {
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) top = std::max({top, std::abs(out.u[i]), std::abs(out.v[i])});
    return 8.0 * std::numeric_limits<double>::epsilon() * top / (h * h);
  };

  while (res > tol) {
    if (out.iterations >= max_iter) {
      throw NonConvergence(fmt::format("Newton did not reach tol {:.1e} in {} iterations (residual {:.3e})", tol,
                                       max_iter, res),
                           history);
    }
    newton_direction(out.u, out.v, h, beta, ru, rv, du, dv);
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= kMaxHalvings && !accepted; ++halving, alpha *= 0.5) {
      int clipped = 0;
      const double tres = try_step(alpha, clipped);
      if (tres < res) {
        accept(tres, clipped);
        accepted = true;
      }
    }
    ++out.iterations;
    history.push_back(res);
    if (!accepted && res <= roundoff_floor()) break;
    if (!accepted) {
      throw NonConvergence(fmt::format("Newton stagnated: no residual decrease after {} halvings (residual {:.3e})",
                                       kMaxHalvings, res),
                           history);
    }
  }

  // One more full step tightens the solution below what the residual test
  // resolves; it is kept only if the residual stays within tol.
  newton_direction(out.u, out.v, h, beta, ru, rv, du, dv);
  int clipped = 0;
  const double polished = try_step(1.0, clipped);
  if (polished <= tol) {
    accept(polished, clipped);
    ++out.iterations;
  }

  // Alternating scalar solves repair values that Newton clipped or could only
  // resolve to absolute accuracy. A sweep is kept while the residual holds.
  for (int sweep = 0; sweep < kTailSweeps; ++sweep) {
    tu = out.u;
    tv = out.v;
    scalar_solve(tu, tv, h, beta);
    scalar_solve(tv, tu, h, beta);
    residual_vectors(tu, tv, h, beta, tru, trv);
    const double tres = max_abs(tru, trv);
    if (!(tres <= std::max(tol, res))) break;
    accept(tres, 0);
  }

  out.residual = res;
  return out;
}

Profile1D solve_heteroclinic(const HeteroclinicOptions& opts) {
  if (!(opts.L >= 10.0)) throw ConfigError(fmt::format("need L >= 10, got {}", opts.L));
  if (opts.n < 1001 || opts.n % 2 == 0) throw ConfigError(fmt::format("need odd n >= 1001, got {}", opts.n));
  if (!(opts.slope > 0.0)) throw ConfigError("slope must be positive");
  if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
  if (std::abs(opts.shift) >= 0.5 * opts.L) throw ConfigError("shift must stay well inside the interval");

  Profile1D p;
  p.L = opts.L;
  p.n = opts.n;
  p.h = 2.0 * opts.L / (opts.n - 1);
  p.slope = opts.slope;
  p.shift = opts.shift;
  const auto n = static_cast<std::size_t>(opts.n);
  const double s = opts.slope;

  std::vector<double> u(n);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = p.t(static_cast<int>(i)) - opts.shift;
    u[i] = 0.5 * s * (t + std::sqrt(t * t + 1.0));
    v[i] = 0.5 * s * (-t + std::sqrt(t * t + 1.0));
  }

  auto solve_with_offset = [&](double b) {
    u.front() = 0.0;
    v.back() = 0.0;
    u.back() = s * (opts.L - opts.shift) + b;
    v.front() = s * (opts.L + opts.shift) + b;
    DirichletSolve1D sol = solve_dirichlet_1d(u, v, p.h, 1.0, opts.tol, opts.max_iter);
    p.newton_iterations += sol.iterations;
    p.clipped_values += sol.clipped_values;
    u = sol.u;
    v = sol.v;
    p.residual_norm = sol.residual;
    return (u[n - 1] - u[n - 2]) / p.h - s;
  };

  // Secant on the asymptotic offset; the end slope is affine in b up to
  // exponentially small terms, so this converges in a handful of steps.
  double b0 = 0.0;
  double f0 = solve_with_offset(b0);
  double b1 = 0.5 * std::sqrt(s);
  double f1 = solve_with_offset(b1);
  std::vector<double> history{std::abs(f0), std::abs(f1)};
  for (int it = 0; it < 40 && std::abs(f1) > 1e-13 * s; ++it) {
    if (f1 == f0) break;
    const double b2 = b1 - f1 * (b1 - b0) / (f1 - f0);
    b0 = b1;
    f0 = f1;
    b1 = b2;
    f1 = solve_with_offset(b1);
    history.push_back(std::abs(f1));
    if (std::abs(b1 - b0) <= 1e-14 * (1.0 + std::abs(b1))) break;
  }
  if (std::abs(f1) > 1e-9 * s) {
    throw NonConvergence(fmt::format("asymptotic offset iteration stalled (end slope error {:.3e})", f1), history);
  }
  const auto floored = std::count_if(u.begin() + 1, u.end() - 1, [](double x) { return x == kPositivityFloor; }) +
                       std::count_if(v.begin() + 1, v.end() - 1, [](double x) { return x == kPositivityFloor; });
  if (floored > 0) {
    std::cerr << "warning: " << floored << " profile values remain at the positivity floor " << kPositivityFloor
              << " after " << p.clipped_values << " Newton clips\n";
  }
  p.offset = b1;
  p.u = std::move(u);
  p.v = std::move(v);
  p.t0 = center_and_symmetry_defect(p).t0;
  return p;
}

EnergyInvariant energy_invariant(const Profile1D& p) {
  const std::size_t n = p.u.size();
  if (n < 5 || p.v.size() != n) throw ConfigError("profile arrays too short for the energy invariant");
  const double h = p.h;
  std::vector<double> fu(n);
  std::vector<double> fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.u[i]) || !std::isfinite(p.v[i])) throw ConfigError("non-finite profile value");
    fu[i] = p.u[i] * p.v[i] * p.v[i];
    fv[i] = p.u[i] * p.u[i] * p.v[i];
  }
  const double target = p.slope * p.slope;
  EnergyInvariant out;
  out.series.resize(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double du = (p.u[i + 1] - p.u[i - 1]) / (2.0 * h);
    const double dv = (p.v[i + 1] - p.v[i - 1]) / (2.0 * h);
    const double dfu = (fu[i + 1] - fu[i - 1]) / (2.0 * h);
    const double dfv = (fv[i + 1] - fv[i - 1]) / (2.0 * h);
    const double uv = p.u[i] * p.v[i];
    const double raw = du * du + dv * dv - uv * uv;
    const double corr = h * h / 6.0 * (du * dfu + dv * dfv) + h * h / 12.0 * (fu[i] * fu[i] + fv[i] * fv[i]);
    out.series[i - 1] = raw - corr;
    out.raw_max_deviation = std::max(out.raw_max_deviation, std::abs(raw - target) / target);
    out.max_deviation = std::max(out.max_deviation, std::abs(raw - corr - target) / target);
  }
  return out;
}

double profile_value(const Profile1D& p, std::span<const double> values, double t) {
  const double s = std::clamp((t + p.L) / p.h, 0.0, static_cast<double>(p.n - 1));
  const int i = std::min(static_cast<int>(std::floor(s)), p.n - 2);
  const double w = s - i;
  return (1.0 - w) * values[static_cast<std::size_t>(i)] + w * values[static_cast<std::size_t>(i + 1)];
}

SymmetryCenter center_and_symmetry_defect(const Profile1D& p) {
  const std::size_t n = p.u.size();
  std::size_t bracket = n;
  bool negative = false;
  bool positive = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = p.u[i] - p.v[i];
    negative |= d < 0.0;
    positive |= d > 0.0;
  }
  if (!negative || !positive) throw StructureError("u - v has no sign change: profile is not heteroclinic");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d0 = p.u[i] - p.v[i];
    const double d1 = p.u[i + 1] - p.v[i + 1];
    if (d0 < 0.0 && d1 >= 0.0) {
      bracket = i;
      break;
    }
  }
  if (bracket == n) throw StructureError("u - v changes sign but never from negative to nonnegative");
  const double d0 = p.u[bracket] - p.v[bracket];
  const double d1 = p.u[bracket + 1] - p.v[bracket + 1];
  SymmetryCenter out;
  out.t0 = p.t(static_cast<int>(bracket)) + p.h * (-d0) / (d1 - d0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = p.t(static_cast<int>(i));
    const double mirror = 2.0 * out.t0 - t;
    if (mirror < -p.L || mirror > p.L) continue;
    out.defect = std::max(out.defect, std::abs(p.u[i] - profile_value(p, p.v, mirror)));
  }
  return out;
}

Profile1D rescale_profile(const Profile1D& p, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError(fmt::format("rescale needs lambda > 0, got {}", lambda));
  Profile1D q = p;
  q.L = p.L / lambda;
  q.h = p.h / lambda;
  q.slope = p.slope * lambda * lambda;
  q.offset = p.offset * lambda;
  q.shift = p.shift / lambda;
  q.t0 = p.t0 / lambda;
  for (auto& x : q.u) x *= lambda;
  for (auto& x : q.v) x *= lambda;
  q.residual_norm = heteroclinic_residual(q.u, q.v, q.h);
  return q;
}

SolutionPair profile_pair(const Profile1D& p) {
  const double lo[] = {-p.L};
  const double hi[] = {p.L};
  const int n[] = {p.n};
  const GridSpec g = GridSpec::make(1, lo, hi, n);
  return SolutionPair(ScalarField(g, p.u), ScalarField(g, p.v), 1.0);
}

}  // namespace pslab
