#include "pslab/asymptotics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"
#include "pslab/quadrature.hpp"

namespace pslab {

namespace {

constexpr double kLogFloor = 1e-300;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = y[k] - (f.intercept + f.slope * x[k]);
    ssr += e * e;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : (ssr == 0.0 ? 1.0 : 0.0);
  return f;
}

double power_product(double u, double v, double p, double q) { return std::pow(u, p) * std::pow(v, q); }

// max over x' of u^p v^q for every node row along x_N (0 for masked-out rows).
std::vector<double> row_maxima(const SolutionPair& pair, double p, double q, const std::optional<SectorMask>& mask) {
  const GridSpec& g = pair.grid();
  const int axis = g.normal_axis();
  const auto nrows = static_cast<std::size_t>(g.n(axis));
  std::vector<double> rows(nrows, 0.0);
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask && !mask->contains(g.node(i), g.dim())) continue;
    const std::size_t k = i % nrows;
    rows[k] = std::max(rows[k], power_product(u[i], v[i], p, q));
  }
  return rows;
}

void check_exponents(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw ConfigError(fmt::format("exponents must be positive (p={}, q={})", p, q));
}

}  // namespace

bool SectorMask::contains(const Point& x, int dim) const {
  double r2 = 0.0;
  double lateral2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double d = x[a] - x0[a];
    r2 += d * d;
    if (a + 1 < dim) lateral2 += d * d;
  }
  const double r = std::sqrt(r2);
  if (!(r > 0.5 * R && r < R)) return false;
  const double axial = sign * (x[dim - 1] - x0[dim - 1]);
  return std::sqrt(lateral2) < tau * axial;
}

DecayFit decay_fit(const SolutionPair& pair, double p, double q, double a, double b,
                   const std::optional<SectorMask>& mask) {
  check_exponents(p, q);
  const GridSpec& g = pair.grid();
  const int axis = g.normal_axis();
  if (!(b > a)) throw ConfigError(fmt::format("decay slab needs b > a (got [{}, {}])", a, b));
  const double eps = 1e-10 * g.h();
  if (a < g.lo(axis) - eps || b > g.hi(axis) + eps) {
    throw DomainError(fmt::format("slab [{}, {}] exceeds the x_N range [{}, {}]", a, b, g.lo(axis), g.hi(axis)));
  }
  const std::vector<double> rows = row_maxima(pair, p, q, mask);
  DecayFit out;
  out.p = p;
  out.q = q;
  out.a = a;
  out.b = b;
  std::vector<double> x;
  std::vector<double> y;
  for (int k = 0; k < g.n(axis); ++k) {
    const double t = g.coord(axis, k);
    if (t < a - eps || t > b + eps) continue;
    const double val = rows[static_cast<std::size_t>(k)];
    if (!(val > kLogFloor) || !std::isfinite(val)) {
      ++out.rows_dropped;
      continue;
    }
    x.push_back(t);
    y.push_back(std::log(val));
  }
  out.rows_used = static_cast<int>(x.size());
  if (x.size() < 4) {
    throw InsufficientData(fmt::format("decay fit on [{}, {}] has {} usable rows ({} dropped); need 4", a, b, x.size(),
                                       out.rows_dropped));
  }
  const LineFit f = fit_line(x, y);
  out.rate = f.slope;
  out.amplitude = f.intercept;
  out.r_squared = f.r_squared;
  return out;
}

double far_field_height(const SolutionPair& pair, double p, double q, bool upper, double min_r2) {
  check_exponents(p, q);
  const GridSpec& g = pair.grid();
  const int axis = g.normal_axis();
  const std::vector<double> rows = upper ? row_maxima(pair, p, q, std::nullopt) : row_maxima(pair, q, p, std::nullopt);
  // Heights in the orientation where the far field lies at large t.
  std::vector<double> t;
  std::vector<double> logv;
  std::vector<char> usable;
  const int n = g.n(axis);
  for (int j = 1; j < n - 1; ++j) {
    const int k = upper ? j : n - 1 - j;
    const double val = rows[static_cast<std::size_t>(k)];
    t.push_back(upper ? g.coord(axis, k) : -g.coord(axis, k));
    usable.push_back(val > kLogFloor && std::isfinite(val));
    logv.push_back(usable.back() ? std::log(val) : 0.0);
  }
  for (std::size_t start = 0; start < t.size(); ++start) {
    if (t[start] < -1e-12 * g.h()) continue;
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = start; k < t.size(); ++k) {
      if (!usable[k]) continue;
      x.push_back(t[k]);
      y.push_back(logv[k]);
    }
    if (x.size() < 4) break;
    if (fit_line(x, y).r_squared >= min_r2) return t[start];
  }
  throw InsufficientData(fmt::format("no height reaches r² ≥ {} in the {} far field", min_r2, upper ? "upper" : "lower"));
}

CoshOracle cosh_decay_oracle(double K, double A, double L, int n) {
  if (!(K > 0.0) || !(A > 0.0) || !(L > 0.0)) {
    throw ConfigError(fmt::format("cosh oracle needs K, A, L > 0 (got {}, {}, {})", K, A, L));
  }
  if (n < 5 || n % 2 == 0) throw ConfigError("cosh oracle needs an odd node count ≥ 5");
  const double h = 2.0 * L / (n - 1);
  const double k12 = K * h * h / 12.0;
  const double off = 1.0 - k12;
  const double diag = -(2.0 + 10.0 * k12);
  // Thomas elimination on the interior unknowns 1..n-2.
  const auto m = static_cast<std::size_t>(n - 2);
  std::vector<double> c(m);
  std::vector<double> d(m);
  for (std::size_t i = 0; i < m; ++i) {
    double rhs = 0.0;
    if (i == 0) rhs -= off * A;
    if (i + 1 == m) rhs -= off * A;
    const double denom = i == 0 ? diag : diag - off * c[i - 1];
    c[i] = off / denom;
    d[i] = i == 0 ? rhs / denom : (rhs - off * d[i - 1]) / denom;
  }
  std::vector<double> v(m);
  v[m - 1] = d[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) v[i] = d[i] - c[i] * v[i + 1];

  CoshOracle out;
  out.K = K;
  out.A = A;
  out.L = L;
  out.h = h;
  out.numeric_mid = v[(m - 1) / 2];
  out.exact_mid = A / std::cosh(std::sqrt(K) * L);
  out.relative_error = std::abs(out.numeric_mid - out.exact_mid) / out.exact_mid;
  out.within_bound = out.numeric_mid <= out.exact_mid * (1.0 + 5.0 * h * h);
  return out;
}

double cosh_rate_fit(double K, double A, const std::vector<double>& Ls, int n) {
  if (Ls.size() < 2) throw InsufficientData("rate fit needs at least two half-widths");
  std::vector<double> x;
  std::vector<double> y;
  for (double L : Ls) {
    x.push_back(L);
    y.push_back(std::log(cosh_decay_oracle(K, A, L, n).numeric_mid));
  }
  return -fit_line(x, y).slope / std::sqrt(K);
}

namespace {

MovingPlaneReport plane_scan(const GridSpec& g, double lambda,
                             const std::function<void(std::size_t, const Point&, double&, double&)>& compare) {
  const int axis = g.normal_axis();
  const double eps = 1e-10 * g.h();
  MovingPlaneReport rep;
  rep.lambda = lambda;
  std::size_t total = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.node(i);
    if (x[axis] < lambda - eps) continue;
    ++total;
    Point y = x;
    y[axis] = 2.0 * lambda - x[axis];
    if (y[axis] < g.lo(axis) - eps) continue;
    y[axis] = std::max(y[axis], g.lo(axis));
    ++rep.checked_nodes;
    double vu = 0.0;
    double vv = 0.0;
    compare(i, y, vu, vv);
    rep.max_violation_u = std::max(rep.max_violation_u, vu);
    rep.max_violation_v = std::max(rep.max_violation_v, vv);
    if (std::max(vu, vv) > worst) {
      worst = std::max(vu, vv);
      rep.worst_node = x;
    }
  }
  if (rep.checked_nodes == 0) {
    throw DomainError(fmt::format("no node of T_lambda (lambda = {}) has its reflection inside the box", lambda));
  }
  rep.coverage = static_cast<double>(rep.checked_nodes) / static_cast<double>(total);
  return rep;
}

}  // namespace

MovingPlaneReport moving_plane_check(const SolutionPair& pair, double lambda) {
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  return plane_scan(pair.grid(), lambda, [&](std::size_t i, const Point& y, double& vu, double& vv) {
    vu = std::max(0.0, interpolate(pair.u(), y) - u[i]);
    vv = std::max(0.0, v[i] - interpolate(pair.v(), y));
  });
}

MovingPlaneReport moving_plane_check(const ScalarField& f, double lambda) {
  const auto u = f.values();
  return plane_scan(f.grid(), lambda, [&](std::size_t i, const Point& y, double& vu, double& vv) {
    vu = std::max(0.0, interpolate(f, y) - u[i]);
    vv = 0.0;
  });
}

std::vector<double> plane_heights(const GridSpec& grid, int count) {
  if (count < 1) throw ConfigError("need at least one plane");
  const int axis = grid.normal_axis();
  const double lo = grid.lo(axis);
  const double hi = grid.hi(axis);
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * (k + 1) / (count + 1));
  return out;
}

ConeProbe directional_monotonicity(const SolutionPair& pair, const Vec3& nu, bool upper, double M) {
  const GridSpec& g = pair.grid();
  const int dim = g.dim();
  double n2 = 0.0;
  for (int a = 0; a < dim; ++a) n2 += nu[a] * nu[a];
  for (int a = dim; a < 3; ++a) {
    if (nu[a] != 0.0) throw ConfigError("direction has components beyond the grid dimension");
  }
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12) throw ConfigError(fmt::format("direction must be a unit vector (|nu| = {})", std::sqrt(n2)));
  const int axis = g.normal_axis();
  ConeProbe out;
  out.nu = nu;
  out.upper = upper;
  out.M = M;
  out.min_derivative = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 ijk = g.multi_index(i);
    if (g.is_boundary(ijk)) continue;
    const double xn = g.coord(axis, ijk[axis]);
    if (upper ? !(xn > M) : !(xn < -M)) continue;
    const double d = upper ? dot(nodal_gradient(pair.u(), ijk), nu) : -dot(nodal_gradient(pair.v(), ijk), nu);
    ++out.nodes;
    if (d < out.min_derivative) {
      out.min_derivative = d;
      out.argmin = g.node(ijk);
    }
  }
  if (out.nodes == 0) {
    throw DomainError(fmt::format("no interior node with x_N {} {}", upper ? ">" : "<", upper ? M : -M));
  }
  return out;
}

double one_dimensionality_defect(const SolutionPair& pair) {
  const GridSpec& g = pair.grid();
  const auto nrows = static_cast<std::size_t>(g.n(g.normal_axis()));
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> umin(nrows, inf), umax(nrows, -inf), vmin(nrows, inf), vmax(nrows, -inf);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t k = i % nrows;
    umin[k] = std::min(umin[k], u[i]);
    umax[k] = std::max(umax[k], u[i]);
    vmin[k] = std::min(vmin[k], v[i]);
    vmax[k] = std::max(vmax[k], v[i]);
  }
  double du = 0.0;
  double dv = 0.0;
  for (std::size_t k = 0; k < nrows; ++k) {
    du = std::max(du, umax[k] - umin[k]);
    dv = std::max(dv, vmax[k] - vmin[k]);
  }
  const double sup = std::max(pair.u().max(), pair.v().max());
  return sup > 0.0 ? (du + dv) / sup : 0.0;
}

LevelSetExtent level_set_extent(const SolutionPair& pair, double c) {
  if (!(c > 0.0)) throw ConfigError(fmt::format("level-set threshold must be positive, got {}", c));
  const GridSpec& g = pair.grid();
  const int axis = g.normal_axis();
  const auto nrows = static_cast<std::size_t>(g.n(axis));
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  LevelSetExtent out;
  out.c = c;
  out.column_hit.assign(g.size() / nrows, false);
  out.min_xN = std::numeric_limits<double>::infinity();
  out.max_xN = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(std::abs(u[i] - v[i]) < c)) continue;
    const double xn = g.coord(axis, static_cast<int>(i % nrows));
    out.empty = false;
    out.min_xN = std::min(out.min_xN, xn);
    out.max_xN = std::max(out.max_xN, xn);
    out.zeta = std::max(out.zeta, std::abs(xn));
    out.column_hit[i / nrows] = true;
  }
  if (out.empty) {
    out.min_xN = 0.0;
    out.max_xN = 0.0;
  }
  out.all_columns_hit = !out.empty && std::all_of(out.column_hit.begin(), out.column_hit.end(), [](bool b) { return b; });
  return out;
}

StripBounds strip_bound_scan(const SolutionPair& pair, double M) {
  const GridSpec& g = pair.grid();
  const int axis = g.normal_axis();
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  StripBounds out;
  out.M = M;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 ijk = g.multi_index(i);
    if (g.is_boundary(ijk)) continue;
    const double xn = g.coord(axis, ijk[axis]);
    if (xn <= M) {
      out.sup_u_plus_grad = std::max(out.sup_u_plus_grad, u[i] + std::sqrt(norm2(nodal_gradient(pair.u(), ijk))));
    }
    if (xn >= -M) {
      out.sup_v_plus_grad = std::max(out.sup_v_plus_grad, v[i] + std::sqrt(norm2(nodal_gradient(pair.v(), ijk))));
    }
  }
  return out;
}

}  // namespace pslab
