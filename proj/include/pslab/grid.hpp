#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace pslab {

/// Point in up to three dimensions. Components beyond the grid dimension are 0.
using Point = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// Uniform, isotropic Cartesian node grid on a box in 1, 2 or 3 dimensions.
///
/// Storage is row-major with the last axis varying fastest; the last axis is
/// the distinguished direction x_N used throughout the diagnostics.
class GridSpec {
 public:
  GridSpec() = default;

  /// Validates and builds a grid. Throws ConfigError on bad bounds, fewer than
  /// three nodes on an axis, or anisotropic spacing.
  static GridSpec make(int dim, std::span<const double> lo, std::span<const double> hi,
                       std::span<const int> n);
  /// Box [lo, hi]^dim with n nodes per axis.
  static GridSpec cube(int dim, double lo, double hi, int n);

  int dim() const { return dim_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  int n(int axis) const { return n_[axis]; }
  double h() const { return h_; }
  int normal_axis() const { return dim_ - 1; }

  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[axis]; }

  std::size_t index(const Index3& ijk) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim_; ++a) idx += static_cast<std::size_t>(ijk[a]) * stride_[a];
    return idx;
  }
  Index3 multi_index(std::size_t idx) const {
    Index3 ijk{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      ijk[a] = static_cast<int>(idx / stride_[a]);
      idx %= stride_[a];
    }
    return ijk;
  }

  double coord(int axis, int i) const { return lo_[axis] + i * h_; }
  Point node(std::size_t idx) const;
  Point node(const Index3& ijk) const;

  bool is_boundary(const Index3& ijk) const;
  bool is_boundary(std::size_t idx) const { return is_boundary(multi_index(idx)); }

  /// True when p lies in the closed box (with a rounding allowance).
  bool contains(const Point& p) const;

  /// Largest r such that the sphere of radius r around x0 stays at least
  /// `margin` away from every face. Negative when x0 itself is too close.
  double max_radius(const Point& x0, double margin) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b);

 private:
  int dim_ = 0;
  std::array<double, 3> lo_{};
  std::array<double, 3> hi_{};
  std::array<int, 3> n_{1, 1, 1};
  std::array<std::size_t, 3> stride_{1, 1, 1};
  std::size_t size_ = 0;
  double h_ = 0.0;
};

}  // namespace pslab
