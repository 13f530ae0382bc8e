#pragma once

#include <cmath>
#include <concepts>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

/// Nodes and weights on the unit sphere S^{N-1}, N in {2, 3}.
///
/// 2D: uniform angles with equal (trapezoid) weights. 3D: Gauss–Legendre in
/// the cosine of the polar angle times uniform azimuth.
class SphereQuadrature {
 public:
  static SphereQuadrature circle(int n_angles);
  static SphereQuadrature sphere(int n_polar, int n_azimuth);
  /// 720 angles in 2D; 64 × 128 in 3D.
  static SphereQuadrature standard(int dim);

  int dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Sum of weights, |S^{N-1}|.
  double measure() const;

 private:
  int dim_ = 0;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

/// |S^{N-1}| in closed form.
double unit_sphere_measure(int dim);

/// Gauss–Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

template <class Expr>
concept SampleExpr = std::invocable<const Expr&, const Sample&> &&
                     std::convertible_to<std::invoke_result_t<const Expr&, const Sample&>, double>;

/// Throws DomainError unless the sphere of radius r around x0 keeps a
/// one-cell margin from the box faces.
void require_sphere_inside(const GridSpec& grid, const Point& x0, double r);

/// Default shell count for ball integrals: 4·r/h, at least 8.
int default_shell_count(const GridSpec& grid, double r);

namespace detail {

template <SampleExpr Expr>
double weighted_sphere_sum(const Expr& expr, const SolutionPair& pair, const Point& x0, double r,
                           const SphereQuadrature& quad, std::vector<double>& scratch) {
  const auto& nodes = quad.nodes();
  const auto& w = quad.weights();
  scratch.resize(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Point p = x0;
    for (int a = 0; a < quad.dim(); ++a) p[a] += r * nodes[k][a];
    scratch[k] = w[k] * static_cast<double>(expr(sample_pair(pair, x0, p)));
  }
  return pairwise_sum(scratch);
}

}  // namespace detail

/// ∫_{∂B_r(x0)} expr dσ = r^{N-1} Σ_k w_k expr(x0 + r ω_k).
template <SampleExpr Expr>
double sphere_integral(const Expr& expr, const SolutionPair& pair, const Point& x0, double r,
                       const SphereQuadrature& quad) {
  require_sphere_inside(pair.grid(), x0, r);
  std::vector<double> scratch;
  return std::pow(r, quad.dim() - 1) * detail::weighted_sphere_sum(expr, pair, x0, r, quad, scratch);
}

/// ∫_0^r s^power (∫_{S^{N-1}} g(x0 + sω) dω) ds by the composite trapezoid
/// rule over n_shells intervals. power = N-1 gives the plain ball integral;
/// power = 1 gives the kernel-weighted integral ∫_{B_r} g |y-x0|^{2-N} dy.
template <SampleExpr Expr>
double radial_integral(const Expr& expr, const SolutionPair& pair, const Point& x0, double r,
                       const SphereQuadrature& quad, int n_shells, double power) {
  require_sphere_inside(pair.grid(), x0, r);
  if (n_shells < 1) n_shells = 1;
  const auto shells = static_cast<std::size_t>(n_shells);
  std::vector<double> terms(shells + 1, 0.0);
  const double ds = r / n_shells;
  parallel_for(shells + 1, [&](std::size_t b, std::size_t e) {
    std::vector<double> scratch;
    for (std::size_t j = b; j < e; ++j) {
      const double s = ds * static_cast<double>(j);
      const double weight = (j == 0 || j == shells) ? 0.5 : 1.0;
      const double radial = (power == 0.0) ? 1.0 : std::pow(s, power);
      if (radial == 0.0) continue;
      terms[j] = weight * radial * detail::weighted_sphere_sum(expr, pair, x0, s, quad, scratch);
    }
  });
  return ds * pairwise_sum(terms);
}

/// Kernel-weighted ball integral ∫_{B_r(x0)} g(y)/|y-x0|^{N-2} dy via the shell identity.
template <SampleExpr Expr>
double shell_ball_integral(const Expr& expr, const SolutionPair& pair, const Point& x0, double r,
                           const SphereQuadrature& quad, int n_shells) {
  return radial_integral(expr, pair, x0, r, quad, n_shells, 1.0);
}

/// Plain ball integral ∫_{B_r(x0)} g(y) dy.
template <SampleExpr Expr>
double ball_integral(const Expr& expr, const SolutionPair& pair, const Point& x0, double r,
                     const SphereQuadrature& quad, int n_shells) {
  return radial_integral(expr, pair, x0, r, quad, n_shells, static_cast<double>(quad.dim() - 1));
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }

}  // namespace pslab
