#pragma once

#include <optional>
#include <vector>

#include "pslab/field.hpp"

namespace pslab {

/// Conical sector around the x_N axis through x0 inside the annulus
/// R/2 < |x - x0| < R: |x' - x0'| < tau·(±(x_N - x0_N)).
struct SectorMask {
  Point x0{};
  double R = 1.0;
  double tau = 1.0;
  /// +1 for the upper cone, -1 for the lower one.
  int sign = 1;

  bool contains(const Point& x, int dim) const;
};

struct DecayFit {
  double p = 1.0;
  double q = 1.0;
  double a = 0.0;
  double b = 0.0;
  /// Slope of log(max_{x'} u^p v^q) against x_N.
  double rate = 0.0;
  /// Intercept of the same fit.
  double amplitude = 0.0;
  double r_squared = 0.0;
  int rows_used = 0;
  int rows_dropped = 0;
};

/// Least-squares fit of log(max over x' of u^p v^q) against x_N over the node
/// rows with x_N in [a, b]. Rows where the maximum is not above 1e-300 are
/// dropped; fewer than four usable rows throws InsufficientData.
DecayFit decay_fit(const SolutionPair& pair, double p, double q, double a, double b,
                   const std::optional<SectorMask>& mask = std::nullopt);

/// Smallest node height M ≥ 0 such that decay_fit over [M, top] reaches
/// r² ≥ min_r2, where top is the last interior row. With upper = false the
/// mirrored problem (u^q v^p over [-top, -M]) is used. Throws
/// InsufficientData when no height qualifies.
double far_field_height(const SolutionPair& pair, double p, double q, bool upper = true, double min_r2 = 0.99);

struct CoshOracle {
  double K = 0.0;
  double A = 0.0;
  double L = 0.0;
  double h = 0.0;
  double numeric_mid = 0.0;
  /// A / cosh(√K L)
  double exact_mid = 0.0;
  double relative_error = 0.0;
  /// numeric_mid ≤ exact_mid·(1 + 5h²)
  bool within_bound = true;
};

/// Solves v'' = K v on [-L, L] with v(±L) = A by the fourth-order compact
/// (Numerov) tridiagonal scheme on n nodes and reports v(0).
CoshOracle cosh_decay_oracle(double K, double A, double L, int n = 2001);

/// c in v(0) ≈ C·e^{-c √K L}, fitted by least squares across the given L.
double cosh_rate_fit(double K, double A, const std::vector<double>& Ls, int n = 2001);

struct MovingPlaneReport {
  double lambda = 0.0;
  /// max over T_λ of (u_λ - u)⁺
  double max_violation_u = 0.0;
  /// max over T_λ of (v - v_λ)⁺
  double max_violation_v = 0.0;
  std::optional<Point> worst_node;
  /// Nodes of T_λ whose reflection stays in the box, over all nodes of T_λ.
  double coverage = 0.0;
  std::size_t checked_nodes = 0;
};

/// Compares the pair with its reflection u_λ(x', x_N) = u(x', 2λ - x_N)
/// on T_λ = {x_N ≥ λ}, interpolating reflected heights. Only the band whose
/// reflection stays in the box is tested; an empty band throws DomainError.
MovingPlaneReport moving_plane_check(const SolutionPair& pair, double lambda);
/// Single-field variant: only (u_λ - u)⁺ is reported.
MovingPlaneReport moving_plane_check(const ScalarField& u, double lambda);

/// Plane heights spread over the interior of the box along x_N.
std::vector<double> plane_heights(const GridSpec& grid, int count);

struct ConeProbe {
  Vec3 nu{};
  bool upper = true;
  double M = 0.0;
  double min_derivative = 0.0;
  std::optional<Point> argmin;
  std::size_t nodes = 0;
};

/// min over interior nodes with x_N > M of ⟨∇_h u, ν⟩ (upper), or over
/// x_N < -M of -⟨∇_h v, ν⟩ (lower), with centered differences.
/// Throws ConfigError unless |ν| = 1 within 1e-12 and DomainError when no
/// interior node lies in the region.
ConeProbe directional_monotonicity(const SolutionPair& pair, const Vec3& nu, bool upper, double M);

/// max_{x_N} (max - min over x' of u) + the same for v, over max(sup u, sup v).
double one_dimensionality_defect(const SolutionPair& pair);

struct LevelSetExtent {
  double c = 0.0;
  bool empty = true;
  double min_xN = 0.0;
  double max_xN = 0.0;
  /// max |x_N| over the set.
  double zeta = 0.0;
  /// Per x'-column (row-major over the leading axes): does the set meet it?
  std::vector<bool> column_hit;
  bool all_columns_hit = false;
};

/// Nodes with |u - v| < c. Throws ConfigError unless c > 0.
LevelSetExtent level_set_extent(const SolutionPair& pair, double c);

struct StripBounds {
  double M = 0.0;
  /// sup over interior nodes with x_N ≤ M of u + |∇_h u|
  double sup_u_plus_grad = 0.0;
  /// sup over interior nodes with x_N ≥ -M of v + |∇_h v|
  double sup_v_plus_grad = 0.0;
};

StripBounds strip_bound_scan(const SolutionPair& pair, double M);

}  // namespace pslab
