#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pslab/grid.hpp"

namespace pslab {

using Vec3 = std::array<double, 3>;

/// Node values of a scalar function on a GridSpec. Immutable after construction.
class ScalarField {
 public:
  ScalarField() = default;
  /// Throws ConfigError when the value count differs from grid.size() or a
  /// value is not finite.
  ScalarField(GridSpec grid, std::vector<double> values);

  /// Samples fn at every node.
  static ScalarField sample(const GridSpec& grid, const std::function<double(const Point&)>& fn);

  const GridSpec& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(const Index3& ijk) const { return values_[grid_.index(ijk)]; }

  double max() const;
  double min() const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Positive solution candidate (u, v) of -Δu = -β u v², -Δv = -β u² v.
///
/// u and v share one grid and are nonnegative at every node. β = 0 is
/// admitted for the decoupled harmonic case.
class SolutionPair {
 public:
  SolutionPair() = default;
  SolutionPair(ScalarField u, ScalarField v, double beta);

  /// Builds a pair without the sign check. Only meant for synthetic
  /// counterexamples fed to comparison diagnostics.
  static SolutionPair unchecked(ScalarField u, ScalarField v, double beta);

  const ScalarField& u() const { return u_; }
  const ScalarField& v() const { return v_; }
  double beta() const { return beta_; }
  const GridSpec& grid() const { return u_.grid(); }

 private:
  ScalarField u_;
  ScalarField v_;
  double beta_ = 1.0;
};

/// Standard (2·dim+1)-point Laplacian. Boundary nodes are set to 0; only
/// interior values are meaningful.
ScalarField laplacian(const ScalarField& f);

/// Discrete Laplacian at one interior node.
double laplacian_at(const ScalarField& f, const Index3& ijk);

/// Multilinear interpolation. Throws DomainError outside the box.
double interpolate(const ScalarField& f, const Point& p);

/// Gradient of the multilinear interpolant at p (one-sided within the cell
/// containing p). Exact on fields that are piecewise linear between node rows.
Vec3 interpolate_gradient(const ScalarField& f, const Point& p);

/// Centered-difference gradient at an interior node.
Vec3 nodal_gradient(const ScalarField& f, const Index3& ijk);

/// Values and gradients of both components of a pair at one point.
struct Sample {
  double u = 0.0;
  double v = 0.0;
  Vec3 grad_u{};
  Vec3 grad_v{};
  Point rel{};     ///< position relative to the sphere/ball center
  Vec3 normal{};   ///< outward unit normal of the sphere through the point
  double radius = 0.0;
};

/// Evaluates the pair at p; rel/normal/radius are filled relative to x0.
Sample sample_pair(const SolutionPair& pair, const Point& x0, const Point& p);

}  // namespace pslab
