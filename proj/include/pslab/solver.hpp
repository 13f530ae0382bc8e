#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/ode1d.hpp"

namespace pslab {

enum class BoundaryKind { ProfileLift, HarmonicTrace, Custom };

std::string to_string(BoundaryKind kind);

/// Dirichlet data for u and v. Arrays span the whole grid; only boundary
/// entries are meaningful and interior entries are kept at 0.
struct BoundaryData {
  GridSpec grid;
  std::vector<double> u;
  std::vector<double> v;
  BoundaryKind kind = BoundaryKind::Custom;

  /// Samples the two functions on the boundary nodes.
  static BoundaryData from_functions(const GridSpec& grid, const std::function<double(const Point&)>& u,
                                     const std::function<double(const Point&)>& v,
                                     BoundaryKind kind = BoundaryKind::Custom);
  /// Throws ConfigError on negative or non-finite boundary values.
  void validate() const;
};

struct SolveOptions {
  double tol = 1e-9;
  int max_sweeps = 200000;
  /// SOR factor in (0, 2); unset means 1.7 in 2D and 1.5 in 3D.
  std::optional<double> omega;
  /// Print the residual to stderr every log_every sweeps (0 = silent).
  int log_every = 0;
  /// Sweeps between residual evaluations.
  int check_every = 10;
};

double default_omega(int dim);
/// Optimal SOR factor for the Laplacian on this grid, 2/(1 + sin(π h / ℓ))
/// with ℓ the longest box side.
double laplace_optimal_omega(const GridSpec& grid);

struct SolveResult {
  SolutionPair pair;
  int sweeps = 0;
  /// Sweeps spent on the harmonic-extension initial guess.
  int initial_sweeps = 0;
  double residual_u = 0.0;
  double residual_v = 0.0;
  double omega = 0.0;
  std::vector<double> residual_history;
};

/// Damped nonlinear red-black Gauss–Seidel/SOR for
///   -Δu = -β u v², -Δv = -β u² v
/// with Dirichlet data. Each node update is
///   u ← (Σ_nb u) / (2·dim + h² β v²),  v ← (Σ_nb v) / (2·dim + h² β u²)
/// blended by omega and projected onto [0, ∞). Without `initial`, the
/// iteration starts from the harmonic extension of the boundary data.
///
/// Throws NonConvergence when max_sweeps is exhausted and DivergenceError on
/// NaN (after one automatic retry with omega = 1).
SolveResult solve(const BoundaryData& bdry, double beta, const SolveOptions& opts,
                  const SolutionPair* initial = nullptr);

struct Residual {
  double r_u = 0.0;
  double r_v = 0.0;
};

/// max over interior nodes of |Δ_h u - β u v²| and |Δ_h v - β u² v|.
Residual residual(const SolutionPair& pair);

enum class LiftMode {
  /// Boundary values p(x_N) by linear interpolation of the profile arrays.
  Interpolate,
  /// Profile re-solved on the grid's x_N nodes (same end values), so the
  /// lifted data satisfy the discrete 1D system of this grid exactly.
  GridConsistent,
};

/// Boundary data u(x) = p.u(x_N), v(x) = p.v(x_N).
BoundaryData boundary_from_profile(const Profile1D& p, const GridSpec& grid, LiftMode mode = LiftMode::Interpolate);

/// Whole-field lift (every node, not only the boundary), with β = 1.
SolutionPair lift_profile(const Profile1D& p, const GridSpec& grid, LiftMode mode = LiftMode::Interpolate);

/// Ψ = amplitude · x_N for d = 1 (any dimension) and
/// amplitude · Re((x_1 + i x_N)^d) for d ≥ 2 in 2D; boundary u = Ψ⁺, v = Ψ⁻.
BoundaryData boundary_from_harmonic(int degree, double amplitude, const GridSpec& grid);

/// The harmonic polynomial Ψ used by boundary_from_harmonic.
double harmonic_polynomial(int degree, double amplitude, const Point& x, int dim);

}  // namespace pslab
