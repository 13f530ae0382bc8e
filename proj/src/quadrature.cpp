#include "pslab/quadrature.hpp"

#include <fmt/format.h>

#include <numbers>

#include "pslab/error.hpp"

namespace pslab {

double unit_sphere_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw ConfigError(fmt::format("no sphere measure for dimension {}", dim));
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

SphereQuadrature SphereQuadrature::circle(int n_angles) {
  if (n_angles < 4) throw ConfigError("circle quadrature needs at least 4 angles");
  SphereQuadrature q;
  q.dim_ = 2;
  const double w = 2.0 * std::numbers::pi / n_angles;
  for (int k = 0; k < n_angles; ++k) {
    // Half-step offset keeps nodes off the coordinate axes, where the
    // limiting profiles have their kinks.
    const double theta = w * (k + 0.5);
    q.nodes_.push_back({std::cos(theta), std::sin(theta), 0.0});
    q.weights_.push_back(w);
  }
  return q;
}

SphereQuadrature SphereQuadrature::sphere(int n_polar, int n_azimuth) {
  if (n_polar < 2 || n_azimuth < 4) throw ConfigError("sphere quadrature too coarse");
  SphereQuadrature q;
  q.dim_ = 3;
  std::vector<double> z;
  std::vector<double> wz;
  gauss_legendre(n_polar, z, wz);
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  for (int i = 0; i < n_polar; ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - z[i] * z[i]));
    for (int k = 0; k < n_azimuth; ++k) {
      const double phi = dphi * (k + 0.5);
      // Polar axis is x_N (the last coordinate).
      q.nodes_.push_back({s * std::cos(phi), s * std::sin(phi), z[i]});
      q.weights_.push_back(wz[i] * dphi);
    }
  }
  return q;
}

SphereQuadrature SphereQuadrature::standard(int dim) {
  if (dim == 2) return circle(720);
  if (dim == 3) return sphere(64, 128);
  throw UnsupportedConfiguration(fmt::format("sphere quadrature needs dim 2 or 3, got {}", dim));
}

double SphereQuadrature::measure() const { return pairwise_sum(weights_); }

void require_sphere_inside(const GridSpec& grid, const Point& x0, double r) {
  const double rmax = grid.max_radius(x0, grid.h());
  if (!(r >= 0.0) || r > rmax + 1e-12 * std::max(1.0, rmax)) {
    throw DomainError(fmt::format("sphere of radius {} around ({}, {}, {}) leaves the box; max admissible radius {}",
                                  r, x0[0], x0[1], x0[2], std::max(0.0, rmax)),
                      std::max(0.0, rmax));
  }
}

int default_shell_count(const GridSpec& grid, double r) {
  return std::max(8, static_cast<int>(std::ceil(4.0 * r / grid.h())));
}

}  // namespace pslab
