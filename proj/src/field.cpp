#include "pslab/field.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ConfigError(fmt::format("field has {} values, grid needs {}", values_.size(), grid_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw ConfigError(fmt::format("non-finite field value at node {}", i));
  }
}

ScalarField ScalarField::sample(const GridSpec& grid, const std::function<double(const Point&)>& fn) {
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = fn(grid.node(i));
  return ScalarField(grid, std::move(vals));
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

SolutionPair::SolutionPair(ScalarField u, ScalarField v, double beta)
    : u_(std::move(u)), v_(std::move(v)), beta_(beta) {
  if (!(u_.grid() == v_.grid())) throw ConfigError("u and v live on different grids");
  if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw ConfigError(fmt::format("beta must be >= 0, got {}", beta_));
  for (std::size_t i = 0; i < u_.values().size(); ++i) {
    if (u_[i] < 0.0 || v_[i] < 0.0) {
      throw ConfigError(fmt::format("negative component at node {} (u={}, v={})", i, u_[i], v_[i]));
    }
  }
}

SolutionPair SolutionPair::unchecked(ScalarField u, ScalarField v, double beta) {
  SolutionPair p;
  if (!(u.grid() == v.grid())) throw ConfigError("u and v live on different grids");
  p.u_ = std::move(u);
  p.v_ = std::move(v);
  p.beta_ = beta;
  return p;
}

double laplacian_at(const ScalarField& f, const Index3& ijk) {
  const GridSpec& g = f.grid();
  const std::size_t c = g.index(ijk);
  const auto vals = f.values();
  double s = -2.0 * g.dim() * vals[c];
  for (int a = 0; a < g.dim(); ++a) s += vals[c - g.stride(a)] + vals[c + g.stride(a)];
  return s / (g.h() * g.h());
}

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid();
  std::vector<double> out(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Index3 ijk = g.multi_index(i);
      if (!g.is_boundary(ijk)) out[i] = laplacian_at(f, ijk);
    }
  });
  return ScalarField(g, std::move(out));
}

namespace {

struct Cell {
  Index3 base{0, 0, 0};
  Vec3 t{};
};

Cell locate(const GridSpec& g, const Point& p) {
  if (!g.contains(p)) {
    throw DomainError(fmt::format("point ({}, {}, {}) outside the grid box", p[0], p[1], p[2]));
  }
  Cell c;
  for (int a = 0; a < g.dim(); ++a) {
    const double s = (p[a] - g.lo(a)) / g.h();
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, g.n(a) - 2);
    c.base[a] = i;
    // Points that sit on a node up to rounding take the node value exactly.
    double t = std::clamp(s - i, 0.0, 1.0);
    if (t < 1e-12) t = 0.0;
    if (t > 1.0 - 1e-12) t = 1.0;
    c.t[a] = t;
  }
  return c;
}

// Value and interpolant gradient of f within a located cell.
void eval_cell(const ScalarField& f, const Cell& c, double& value, Vec3& grad) {
  const GridSpec& g = f.grid();
  const int dim = g.dim();
  const auto vals = f.values();
  const std::size_t base = g.index(c.base);
  value = 0.0;
  grad = {0.0, 0.0, 0.0};
  const int corners = 1 << dim;
  for (int k = 0; k < corners; ++k) {
    std::size_t idx = base;
    double w = 1.0;
    Vec3 dw{1.0, 1.0, 1.0};
    for (int a = 0; a < dim; ++a) {
      const bool upper = (k >> a) & 1;
      if (upper) idx += g.stride(a);
      const double wa = upper ? c.t[a] : 1.0 - c.t[a];
      const double da = (upper ? 1.0 : -1.0) / g.h();
      for (int b = 0; b < dim; ++b) dw[b] *= (b == a) ? da : wa;
      w *= wa;
    }
    const double fk = vals[idx];
    value += w * fk;
    for (int a = 0; a < dim; ++a) grad[a] += dw[a] * fk;
  }
}

}  // namespace

double interpolate(const ScalarField& f, const Point& p) {
  double value = 0.0;
  Vec3 grad{};
  eval_cell(f, locate(f.grid(), p), value, grad);
  return value;
}

Vec3 interpolate_gradient(const ScalarField& f, const Point& p) {
  double value = 0.0;
  Vec3 grad{};
  eval_cell(f, locate(f.grid(), p), value, grad);
  return grad;
}

Vec3 nodal_gradient(const ScalarField& f, const Index3& ijk) {
  const GridSpec& g = f.grid();
  const std::size_t c = g.index(ijk);
  const auto vals = f.values();
  Vec3 grad{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) {
    grad[a] = (vals[c + g.stride(a)] - vals[c - g.stride(a)]) / (2.0 * g.h());
  }
  return grad;
}

Sample sample_pair(const SolutionPair& pair, const Point& x0, const Point& p) {
  const Cell c = locate(pair.grid(), p);
  Sample s;
  eval_cell(pair.u(), c, s.u, s.grad_u);
  eval_cell(pair.v(), c, s.v, s.grad_v);
  double r2 = 0.0;
  for (int a = 0; a < pair.grid().dim(); ++a) {
    s.rel[a] = p[a] - x0[a];
    r2 += s.rel[a] * s.rel[a];
  }
  s.radius = std::sqrt(r2);
  if (s.radius > 0.0) {
    for (int a = 0; a < pair.grid().dim(); ++a) s.normal[a] = s.rel[a] / s.radius;
  }
  return s;
}

}  // namespace pslab
