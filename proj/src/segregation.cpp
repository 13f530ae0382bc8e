#include "pslab/segregation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

SegregationRow segregation_metrics(const SolutionPair& pair, double alpha, double min_sep) {
  const GridSpec& g = pair.grid();
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  const double beta = pair.beta();
  const double cell = std::pow(g.h(), g.dim());
  SegregationRow row;
  row.beta = beta;
  std::vector<double> energy(g.size(), 0.0);
  std::vector<double> diff(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    diff[i] = u[i] - v[i];
    row.sup_uv = std::max(row.sup_uv, u[i] * v[i]);
  }
  const ScalarField w(g, std::move(diff));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Index3 ijk = g.multi_index(i);
    if (g.is_boundary(ijk)) continue;
    energy[i] = beta * u[i] * u[i] * v[i] * v[i] * cell;
    row.harm_residual = std::max(row.harm_residual, std::abs(laplacian_at(w, ijk)));
  }
  row.interaction = pairwise_sum(energy);
  row.holder = std::max(holder_quotient(pair.u(), alpha, min_sep), holder_quotient(pair.v(), alpha, min_sep));
  return row;
}

SegregationTable sweep(const BoundaryData& bdry, const std::vector<double>& betas, const SweepOptions& opts) {
  if (betas.size() < 3) throw ConfigError(fmt::format("a sweep needs at least 3 beta values, got {}", betas.size()));
  for (std::size_t k = 0; k < betas.size(); ++k) {
    if (!(betas[k] >= 0.0) || !std::isfinite(betas[k])) throw ConfigError(fmt::format("invalid beta {}", betas[k]));
    if (k > 0 && !(betas[k] > betas[k - 1])) throw ConfigError("betas must be strictly increasing");
  }
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw ConfigError(fmt::format("alpha must lie in (0, 1), got {}", opts.alpha));

  SegregationTable table;
  table.alpha = opts.alpha;
  for (double beta : betas) {
    const SolutionPair* start = (opts.cold_start || table.solutions.empty()) ? nullptr : &table.solutions.back();
    SolveResult res;
    try {
      res = solve(bdry, beta, opts.solve, start);
    } catch (const NonConvergence& e) {
      table.complete = false;
      table.failure = fmt::format("beta = {}: {}", beta, e.what());
      break;
    } catch (const DivergenceError& e) {
      table.complete = false;
      table.failure = fmt::format("beta = {}: {}", beta, e.what());
      break;
    }
    SegregationRow row = segregation_metrics(res.pair, opts.alpha, opts.min_sep);
    row.sweeps = res.sweeps + res.initial_sweeps;
    row.residual = std::max(res.residual_u, res.residual_v);
    table.rows.push_back(row);
    table.solutions.push_back(std::move(res.pair));
  }
  return table;
}

double holder_quotient(const ScalarField& f, double alpha, double min_sep, int random_pairs, std::uint64_t seed) {
  const GridSpec& g = f.grid();
  const double h = g.h();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  if (!(min_sep >= 2.0 * h * (1.0 - 1e-12))) {
    throw ConfigError(fmt::format("min_sep = {} is below two cells (2h = {})", min_sep, 2.0 * h));
  }
  const int dim = g.dim();
  constexpr int kMargin = 10;
  Index3 lo{0, 0, 0};
  Index3 hi{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    lo[a] = kMargin;
    hi[a] = g.n(a) - 1 - kMargin;
    if (hi[a] <= lo[a]) throw InsufficientData("grid too small for a subbox 10 cells from the boundary");
  }
  const auto vals = f.values();
  double best = 0.0;
  std::size_t pairs = 0;
  auto consider = [&](const Index3& x, const Index3& y) {
    double d2 = 0.0;
    for (int a = 0; a < dim; ++a) d2 += static_cast<double>((x[a] - y[a]) * (x[a] - y[a]));
    const double d = std::sqrt(d2) * h;
    if (d < min_sep * (1.0 - 1e-12)) return;
    ++pairs;
    best = std::max(best, std::abs(vals[g.index(x)] - vals[g.index(y)]) / std::pow(d, alpha));
  };

  std::vector<Index3> nodes;
  for (int i = lo[0]; i <= (dim > 0 ? hi[0] : 0); ++i) {
    for (int j = (dim > 1 ? lo[1] : 0); j <= (dim > 1 ? hi[1] : 0); ++j) {
      for (int k = (dim > 2 ? lo[2] : 0); k <= (dim > 2 ? hi[2] : 0); ++k) nodes.push_back({i, j, k});
    }
  }

  const int offset = static_cast<int>(std::ceil(min_sep / h - 1e-9));
  for (const Index3& x : nodes) {
    for (int a = 0; a < dim; ++a) {
      Index3 y = x;
      y[a] += offset;
      if (y[a] <= hi[a]) consider(x, y);
      // Ends of each axis-aligned line through the subbox.
      if (x[a] == lo[a]) {
        Index3 z = x;
        z[a] = hi[a];
        if (hi[a] - lo[a] != offset) consider(x, z);
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  for (int k = 0; k < random_pairs; ++k) {
    // Stratified first point, uniform partner.
    const auto stratum = static_cast<std::size_t>((k + unit(rng)) * static_cast<double>(nodes.size()) / random_pairs);
    consider(nodes[std::min(stratum, nodes.size() - 1)], nodes[pick(rng)]);
  }
  if (pairs < 100) throw InsufficientData(fmt::format("only {} node pairs satisfy the separation {}", pairs, min_sep));
  return best;
}

double interface_width(const SolutionPair& pair, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError(fmt::format("threshold must be positive, got {}", threshold));
  const auto u = pair.u().values();
  const auto v = pair.v().values();
  std::size_t count = 0;
  for (std::size_t i = 0; i < u.size(); ++i) count += u[i] * v[i] > threshold ? 1 : 0;
  return static_cast<double>(count) * std::pow(pair.grid().h(), pair.grid().dim());
}

}  // namespace pslab
