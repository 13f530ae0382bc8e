#include "pslab/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::ProfileLift: return "profile-lift";
    case BoundaryKind::HarmonicTrace: return "harmonic-trace";
    case BoundaryKind::Custom: return "custom";
  }
  return "custom";
}

BoundaryData BoundaryData::from_functions(const GridSpec& grid, const std::function<double(const Point&)>& u,
                                          const std::function<double(const Point&)>& v, BoundaryKind kind) {
  BoundaryData b;
  b.grid = grid;
  b.kind = kind;
  b.u.assign(grid.size(), 0.0);
  b.v.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index3 ijk = grid.multi_index(i);
    if (!grid.is_boundary(ijk)) continue;
    const Point p = grid.node(ijk);
    b.u[i] = u(p);
    b.v[i] = v(p);
  }
  b.validate();
  return b;
}

void BoundaryData::validate() const {
  if (u.size() != grid.size() || v.size() != grid.size()) throw ConfigError("boundary arrays do not match the grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_boundary(i)) continue;
    if (!std::isfinite(u[i]) || !std::isfinite(v[i]) || u[i] < 0.0 || v[i] < 0.0) {
      throw ConfigError(fmt::format("boundary value at node {} must be finite and >= 0 (u={}, v={})", i, u[i], v[i]));
    }
  }
}

double default_omega(int dim) { return dim >= 3 ? 1.5 : 1.7; }

double laplace_optimal_omega(const GridSpec& grid) {
  double extent = 0.0;
  for (int a = 0; a < grid.dim(); ++a) extent = std::max(extent, grid.hi(a) - grid.lo(a));
  return 2.0 / (1.0 + std::sin(std::numbers::pi * grid.h() / extent));
}

namespace {

// Grid lines along the last axis whose nodes are all interior candidates.
struct LineSet {
  std::vector<std::size_t> starts;   // index of node with last coordinate 0
  std::vector<int> parity;           // sum of the leading indices mod 2
};

LineSet interior_lines(const GridSpec& g) {
  LineSet lines;
  const std::size_t nlast = static_cast<std::size_t>(g.n(g.dim() - 1));
  for (std::size_t start = 0; start < g.size(); start += nlast) {
    const Index3 ijk = g.multi_index(start);
    bool boundary = false;
    int sum = 0;
    for (int a = 0; a + 1 < g.dim(); ++a) {
      boundary |= ijk[a] == 0 || ijk[a] == g.n(a) - 1;
      sum += ijk[a];
    }
    if (g.dim() == 1) boundary = false;
    if (boundary) continue;
    lines.starts.push_back(start);
    lines.parity.push_back(sum % 2);
  }
  return lines;
}

class Relaxation {
 public:
  Relaxation(const GridSpec& g, double beta, double omega)
      : g_(g), lines_(interior_lines(g)), beta_(beta), omega_(omega), h2_(g.h() * g.h()),
        nlast_(g.n(g.dim() - 1)) {}

  void sweep(std::vector<double>& u, std::vector<double>& v) const {
    for (int color = 0; color < 2; ++color) {
      parallel_for(lines_.starts.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t l = b; l < e; ++l) relax_line(u, v, l, color);
      });
    }
  }

  // Max residual of both equations; NaN propagates.
  std::pair<double, double> residual(const std::vector<double>& u, const std::vector<double>& v) const {
    std::vector<double> ru(lines_.starts.size(), 0.0);
    std::vector<double> rv(lines_.starts.size(), 0.0);
    const double ih2 = 1.0 / h2_;
    parallel_for(lines_.starts.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t l = b; l < e; ++l) {
        double mu = 0.0;
        double mv = 0.0;
        for (int k = 1; k < nlast_ - 1; ++k) {
          const std::size_t c = lines_.starts[l] + static_cast<std::size_t>(k);
          double lu = -2.0 * g_.dim() * u[c];
          double lv = -2.0 * g_.dim() * v[c];
          for (int a = 0; a < g_.dim(); ++a) {
            const std::size_t s = g_.stride(a);
            lu += u[c - s] + u[c + s];
            lv += v[c - s] + v[c + s];
          }
          const double eu = std::abs(lu * ih2 - beta_ * u[c] * v[c] * v[c]);
          const double ev = std::abs(lv * ih2 - beta_ * u[c] * u[c] * v[c]);
          if (std::isnan(eu) || std::isnan(ev)) {
            mu = NAN;
            mv = NAN;
            break;
          }
          mu = std::max(mu, eu);
          mv = std::max(mv, ev);
        }
        ru[l] = mu;
        rv[l] = mv;
      }
    });
    double mu = 0.0;
    double mv = 0.0;
    for (std::size_t l = 0; l < ru.size(); ++l) {
      if (std::isnan(ru[l]) || std::isnan(rv[l])) return {NAN, NAN};
      mu = std::max(mu, ru[l]);
      mv = std::max(mv, rv[l]);
    }
    return {mu, mv};
  }

 private:
  void relax_line(std::vector<double>& u, std::vector<double>& v, std::size_t l, int color) const {
    const std::size_t start = lines_.starts[l];
    const double diag0 = 2.0 * g_.dim();
    int k = 1;
    if ((lines_.parity[l] + k) % 2 != color) ++k;
    for (; k < nlast_ - 1; k += 2) {
      const std::size_t c = start + static_cast<std::size_t>(k);
      double su = 0.0;
      double sv = 0.0;
      for (int a = 0; a < g_.dim(); ++a) {
        const std::size_t s = g_.stride(a);
        su += u[c - s] + u[c + s];
        sv += v[c - s] + v[c + s];
      }
      const double gu = su / (diag0 + h2_ * beta_ * v[c] * v[c]);
      const double un = std::max(0.0, (1.0 - omega_) * u[c] + omega_ * gu);
      const double gv = sv / (diag0 + h2_ * beta_ * un * un);
      const double vn = std::max(0.0, (1.0 - omega_) * v[c] + omega_ * gv);
      u[c] = un;
      v[c] = vn;
    }
  }

  const GridSpec& g_;
  LineSet lines_;
  double beta_;
  double omega_;
  double h2_;
  int nlast_;
};

struct IterationOutcome {
  int sweeps = 0;
  double ru = 0.0;
  double rv = 0.0;
  bool diverged = false;
  bool converged = false;
};

IterationOutcome iterate(const Relaxation& relax, std::vector<double>& u, std::vector<double>& v,
                         const SolveOptions& opts, std::vector<double>& history, const char* label) {
  IterationOutcome out;
  const int check = std::max(1, opts.check_every);
  auto [ru, rv] = relax.residual(u, v);
  for (;;) {
    if (std::isnan(ru) || std::isnan(rv) || std::isinf(ru) || std::isinf(rv)) {
      out.diverged = true;
      return out;
    }
    history.push_back(std::max(ru, rv));
    out.ru = ru;
    out.rv = rv;
    if (std::max(ru, rv) <= opts.tol) {
      out.converged = true;
      return out;
    }
    if (out.sweeps >= opts.max_sweeps) return out;
    const int todo = std::min(check, opts.max_sweeps - out.sweeps);
    for (int s = 0; s < todo; ++s) {
      relax.sweep(u, v);
      ++out.sweeps;
      if (opts.log_every > 0 && out.sweeps % opts.log_every == 0) {
        const auto [lu, lv] = relax.residual(u, v);
        std::cerr << fmt::format("[{}] sweep {:>7}  r_u={:.3e}  r_v={:.3e}\n", label, out.sweeps, lu, lv);
      }
    }
    std::tie(ru, rv) = relax.residual(u, v);
  }
}

}  // namespace

SolveResult solve(const BoundaryData& bdry, double beta, const SolveOptions& opts, const SolutionPair* initial) {
  bdry.validate();
  const GridSpec& g = bdry.grid;
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError(fmt::format("beta must be >= 0, got {}", beta));
  if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
  double omega = opts.omega.value_or(default_omega(g.dim()));
  if (!(omega > 0.0 && omega < 2.0)) throw ConfigError(fmt::format("omega must lie in (0, 2), got {}", omega));
  if (initial != nullptr && !(initial->grid() == g)) throw ConfigError("initial guess lives on a different grid");

  SolveResult result;
  std::vector<double> u0(g.size(), 0.0);
  std::vector<double> v0(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_boundary(i)) {
      u0[i] = bdry.u[i];
      v0[i] = bdry.v[i];
    } else if (initial != nullptr) {
      u0[i] = initial->u()[i];
      v0[i] = initial->v()[i];
    }
  }

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> u = u0;
    std::vector<double> v = v0;
    std::vector<double> history;
    int initial_sweeps = 0;
    if (initial == nullptr) {
      const Relaxation harmonic(g, 0.0, omega);
      std::vector<double> lap_history;
      const IterationOutcome ext = iterate(harmonic, u, v, opts, lap_history, "harmonic");
      initial_sweeps = ext.sweeps;
      if (ext.diverged) {
        if (omega > 1.0 && attempt == 0) { omega = 1.0; continue; }
        throw DivergenceError("NaN in the harmonic extension; try a smaller omega");
      }
      if (!ext.converged) {
        throw NonConvergence(fmt::format("harmonic extension did not converge in {} sweeps", opts.max_sweeps),
                             lap_history);
      }
    }
    IterationOutcome out;
    if (beta == 0.0 && initial == nullptr) {
      out.converged = true;
      const auto [ru, rv] = Relaxation(g, 0.0, omega).residual(u, v);
      out.ru = ru;
      out.rv = rv;
      history.push_back(std::max(ru, rv));
    } else {
      out = iterate(Relaxation(g, beta, omega), u, v, opts, history, "solve");
    }
    if (out.diverged) {
      if (omega > 1.0 && attempt == 0) {
        std::cerr << fmt::format("warning: divergence at omega={}, retrying with omega=1\n", omega);
        omega = 1.0;
        continue;
      }
      throw DivergenceError("NaN detected during relaxation; try a smaller omega");
    }
    if (!out.converged) {
      throw NonConvergence(fmt::format("no convergence in {} sweeps (residual {:.3e}, tol {:.1e})", opts.max_sweeps,
                                       history.empty() ? NAN : history.back(), opts.tol),
                           history);
    }
    result.pair = SolutionPair(ScalarField(g, std::move(u)), ScalarField(g, std::move(v)), beta);
    result.sweeps = out.sweeps;
    result.initial_sweeps = initial_sweeps;
    result.residual_u = out.ru;
    result.residual_v = out.rv;
    result.omega = omega;
    result.residual_history = std::move(history);
    return result;
  }
  throw DivergenceError("relaxation diverged");
}

Residual residual(const SolutionPair& pair) {
  const GridSpec& g = pair.grid();
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  const double beta = pair.beta();
  Residual r;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 ijk = g.multi_index(i);
    if (g.is_boundary(ijk)) continue;
    r.r_u = std::max(r.r_u, std::abs(laplacian_at(pair.u(), ijk) - beta * u[i] * v[i] * v[i]));
    r.r_v = std::max(r.r_v, std::abs(laplacian_at(pair.v(), ijk) - beta * u[i] * u[i] * v[i]));
  }
  return r;
}

namespace {

void require_profile_covers(const Profile1D& p, const GridSpec& grid) {
  const int axis = grid.normal_axis();
  const double tol = 1e-12 * std::max(1.0, p.L);
  if (grid.lo(axis) < -p.L - tol || grid.hi(axis) > p.L + tol) {
    throw DomainError(fmt::format("grid x_N range [{}, {}] exceeds the profile interval [{}, {}]", grid.lo(axis),
                                  grid.hi(axis), -p.L, p.L));
  }
}

// Profile values at the grid's x_N node heights.
std::pair<std::vector<double>, std::vector<double>> column_values(const Profile1D& p, const GridSpec& grid,
                                                                  LiftMode mode) {
  require_profile_covers(p, grid);
  const int axis = grid.normal_axis();
  const auto n = static_cast<std::size_t>(grid.n(axis));
  std::vector<double> cu(n);
  std::vector<double> cv(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = grid.coord(axis, static_cast<int>(k));
    cu[k] = profile_value(p, p.u, t);
    cv[k] = profile_value(p, p.v, t);
  }
  if (mode == LiftMode::GridConsistent) {
    DirichletSolve1D sol = solve_dirichlet_1d(cu, cv, grid.h(), 1.0, 1e-11, 100);
    cu = std::move(sol.u);
    cv = std::move(sol.v);
  }
  return {std::move(cu), std::move(cv)};
}

}  // namespace

BoundaryData boundary_from_profile(const Profile1D& p, const GridSpec& grid, LiftMode mode) {
  const auto [cu, cv] = column_values(p, grid, mode);
  const int axis = grid.normal_axis();
  BoundaryData b;
  b.grid = grid;
  b.kind = BoundaryKind::ProfileLift;
  b.u.assign(grid.size(), 0.0);
  b.v.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Index3 ijk = grid.multi_index(i);
    if (!grid.is_boundary(ijk)) continue;
    const auto k = static_cast<std::size_t>(ijk[axis]);
    b.u[i] = cu[k];
    b.v[i] = cv[k];
  }
  b.validate();
  return b;
}

SolutionPair lift_profile(const Profile1D& p, const GridSpec& grid, LiftMode mode) {
  const auto [cu, cv] = column_values(p, grid, mode);
  const int axis = grid.normal_axis();
  std::vector<double> u(grid.size());
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto k = static_cast<std::size_t>(grid.multi_index(i)[axis]);
    u[i] = cu[k];
    v[i] = cv[k];
  }
  return SolutionPair(ScalarField(grid, std::move(u)), ScalarField(grid, std::move(v)), 1.0);
}

double harmonic_polynomial(int degree, double amplitude, const Point& x, int dim) {
  // Degree 1 is the flat interface x_N = 0 in every dimension.
  if (dim == 2 && degree >= 2) {
    const std::complex<double> z(x[0], x[1]);
    std::complex<double> w(1.0, 0.0);
    for (int k = 0; k < degree; ++k) w *= z;
    return amplitude * w.real();
  }
  return amplitude * x[dim - 1];
}

BoundaryData boundary_from_harmonic(int degree, double amplitude, const GridSpec& grid) {
  if (degree < 1) throw ConfigError(fmt::format("harmonic degree must be >= 1, got {}", degree));
  if (grid.dim() == 1 || (grid.dim() == 3 && degree != 1)) {
    throw UnsupportedConfiguration(
        fmt::format("harmonic trace of degree {} is not supported in dimension {}", degree, grid.dim()));
  }
  const int dim = grid.dim();
  return BoundaryData::from_functions(
      grid, [&](const Point& x) { return std::max(0.0, harmonic_polynomial(degree, amplitude, x, dim)); },
      [&](const Point& x) { return std::max(0.0, -harmonic_polynomial(degree, amplitude, x, dim)); },
      BoundaryKind::HarmonicTrace);
}

}  // namespace pslab
