#pragma once

#include <span>
#include <vector>

#include "pslab/field.hpp"

namespace pslab {

/// Heteroclinic solution of u'' = u v², v'' = u² v on [-L, L].
///
/// u increases from 0 to linear growth with the given slope; v mirrors it.
struct Profile1D {
  double L = 0.0;
  int n = 0;
  double h = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  double slope = 1.0;
  /// Offset b of the linear asymptote u ≈ slope·(t - shift) + b.
  double offset = 0.0;
  double shift = 0.0;
  double residual_norm = 0.0;
  double t0 = 0.0;
  int newton_iterations = 0;
  int clipped_values = 0;

  double t(int i) const { return -L + i * h; }
};

struct HeteroclinicOptions {
  double L = 30.0;
  int n = 6001;
  double slope = 1.0;
  double tol = 1e-10;
  int max_iter = 100;
  /// Translates the boundary data (and hence the symmetry center) by shift.
  double shift = 0.0;
};

/// Damped Newton with block-tridiagonal (2×2) elimination on the
/// second-order finite-difference system.
///
/// Boundary data are u(-L) = 0, v(L) = 0 and the linear asymptotes
/// u(L) = slope·(L - shift) + b, v(-L) = slope·(L + shift) + b. The offset b
/// is not known a priori; an outer secant iteration picks it so that the
/// discrete slope at the ends equals `slope`.
Profile1D solve_heteroclinic(const HeteroclinicOptions& opts);

/// Result of a Dirichlet solve of the discrete 1D system on an arbitrary grid.
struct DirichletSolve1D {
  std::vector<double> u;
  std::vector<double> v;
  double residual = 0.0;
  int iterations = 0;
  int clipped_values = 0;
};

/// Solves the discrete system with Dirichlet values taken from the first and
/// last entries of the initial guess, scaled by beta:
/// (u_{i-1} - 2u_i + u_{i+1})/h² = β u_i v_i² (and symmetric for v).
DirichletSolve1D solve_dirichlet_1d(std::vector<double> u0, std::vector<double> v0, double h,
                                    double beta, double tol, int max_iter);

/// Max-norm finite-difference residual at interior nodes.
double heteroclinic_residual(std::span<const double> u, std::span<const double> v, double h, double beta = 1.0);

struct EnergyInvariant {
  /// max_t |Q(t) - slope²| / slope² of the corrected first integral.
  double max_deviation = 0.0;
  /// Same without the O(h²) correction (plain centered differences).
  double raw_max_deviation = 0.0;
  std::vector<double> series;
};

/// First integral Q = u'² + v'² - u²v² at interior nodes.
///
/// The discrete solution conserves Q only up to O(h²); the series subtracts
/// the leading modified-equation term
///   h²/6 (u'(uv²)' + v'(u²v)') + h²/12 ((uv²)² + (u²v)²)
/// so that a converged profile conserves it to O(h⁴).
EnergyInvariant energy_invariant(const Profile1D& p);

struct SymmetryCenter {
  double t0 = 0.0;
  double defect = 0.0;
};

/// Root of u - v by linear interpolation, and max |u(t0 + t) - v(t0 - t)|.
/// Throws StructureError when u - v does not change sign.
SymmetryCenter center_and_symmetry_defect(const Profile1D& p);

/// (λ u(λ t), λ v(λ t)) on [-L/λ, L/λ]; same node count, slope scaled by λ².
Profile1D rescale_profile(const Profile1D& p, double lambda);

/// Linear interpolation of a profile array at t (clamped to [-L, L]).
double profile_value(const Profile1D& p, std::span<const double> values, double t);

/// Profile as a one-dimensional SolutionPair with β = 1.
SolutionPair profile_pair(const Profile1D& p);

}  // namespace pslab
