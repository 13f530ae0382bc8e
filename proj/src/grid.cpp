#include "pslab/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pslab/error.hpp"

namespace pslab {

GridSpec GridSpec::make(int dim, std::span<const double> lo, std::span<const double> hi,
                        std::span<const int> n) {
  if (dim < 1 || dim > 3) throw ConfigError(fmt::format("grid dimension {} not in {{1,2,3}}", dim));
  const auto d = static_cast<std::size_t>(dim);
  if (lo.size() != d || hi.size() != d || n.size() != d) {
    throw ConfigError(fmt::format("grid bounds/counts must have {} entries", dim));
  }
  GridSpec g;
  g.dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(hi[a] > lo[a])) {
      throw ConfigError(fmt::format("axis {}: need lo < hi, got [{}, {}]", a, lo[a], hi[a]));
    }
    if (n[a] < 3) throw ConfigError(fmt::format("axis {}: need at least 3 nodes, got {}", a, n[a]));
    g.lo_[a] = lo[a];
    g.hi_[a] = hi[a];
    g.n_[a] = n[a];
  }
  g.h_ = (g.hi_[0] - g.lo_[0]) / (g.n_[0] - 1);
  for (int a = 1; a < dim; ++a) {
    const double ha = (g.hi_[a] - g.lo_[a]) / (g.n_[a] - 1);
    if (std::abs(ha - g.h_) > 1e-12 * std::max(1.0, g.h_)) {
      throw ConfigError(fmt::format("anisotropic spacing: h[0]={} h[{}]={}", g.h_, a, ha));
    }
  }
  g.size_ = 1;
  for (int a = dim - 1; a >= 0; --a) {
    g.stride_[a] = g.size_;
    g.size_ *= static_cast<std::size_t>(g.n_[a]);
  }
  return g;
}

GridSpec GridSpec::cube(int dim, double lo, double hi, int n) {
  const std::vector<double> l(static_cast<std::size_t>(dim), lo);
  const std::vector<double> u(static_cast<std::size_t>(dim), hi);
  const std::vector<int> c(static_cast<std::size_t>(dim), n);
  return make(dim, l, u, c);
}

Point GridSpec::node(std::size_t idx) const { return node(multi_index(idx)); }

Point GridSpec::node(const Index3& ijk) const {
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = coord(a, ijk[a]);
  return p;
}

bool GridSpec::is_boundary(const Index3& ijk) const {
  for (int a = 0; a < dim_; ++a) {
    if (ijk[a] == 0 || ijk[a] == n_[a] - 1) return true;
  }
  return false;
}

bool GridSpec::contains(const Point& p) const {
  const double eps = 1e-10 * h_;
  for (int a = 0; a < dim_; ++a) {
    if (!(p[a] >= lo_[a] - eps && p[a] <= hi_[a] + eps)) return false;
  }
  return true;
}

double GridSpec::max_radius(const Point& x0, double margin) const {
  double r = INFINITY;
  for (int a = 0; a < dim_; ++a) {
    r = std::min({r, x0[a] - lo_[a] - margin, hi_[a] - margin - x0[a]});
  }
  return r;
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i) {
    if (a.lo_[i] != b.lo_[i] || a.hi_[i] != b.hi_[i] || a.n_[i] != b.n_[i]) return false;
  }
  return true;
}

}  // namespace pslab
