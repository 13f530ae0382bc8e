#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pslab/solver.hpp"

namespace pslab {

struct SegregationRow {
  double beta = 0.0;
  /// max over nodes of u·v
  double sup_uv = 0.0;
  /// Σ_interior β u² v² h^N
  double interaction = 0.0;
  /// max over interior nodes of |Δ_h (u - v)|
  double harm_residual = 0.0;
  /// max of the Hölder quotients of u and v
  double holder = 0.0;
  int sweeps = 0;
  double residual = 0.0;
};

struct SegregationTable {
  double alpha = 0.0;
  std::vector<SegregationRow> rows;
  /// False when a solve failed; rows then hold the β values solved so far.
  bool complete = true;
  std::string failure;
  /// Converged pairs, one per row.
  std::vector<SolutionPair> solutions;
};

struct SweepOptions {
  SolveOptions solve;
  double alpha = 0.9;
  double min_sep = 0.1;
  /// Solve each β from the harmonic extension instead of the previous β.
  bool cold_start = false;
};

/// Solves the system for each β in increasing order, warm-starting from the
/// previous solution. β = 0 is accepted as the first entry. A failed solve
/// stops the sweep and marks the table incomplete instead of throwing.
///
/// Throws ConfigError for fewer than three β values, a non-increasing list
/// or alpha outside (0, 1).
SegregationTable sweep(const BoundaryData& bdry, const std::vector<double>& betas, const SweepOptions& opts);

/// Metrics of one converged pair.
SegregationRow segregation_metrics(const SolutionPair& pair, double alpha, double min_sep);

/// max |f(x) - f(y)| / |x - y|^α over node pairs with |x - y| ≥ min_sep inside
/// the subbox at distance ≥ 10h from the boundary. Pairs: every axis-aligned
/// pair at the smallest admissible offset, the two ends of every axis-aligned
/// line of the subbox, and `random_pairs` stratified random pairs from a
/// fixed seed.
///
/// Throws ConfigError unless alpha ∈ (0, 1) and min_sep ≥ 2h, and
/// InsufficientData when fewer than 100 pairs qualify.
double holder_quotient(const ScalarField& f, double alpha, double min_sep, int random_pairs = 4096,
                       std::uint64_t seed = 20240917);

/// Measure (node count × h^N) of {u·v > threshold}.
double interface_width(const SolutionPair& pair, double threshold);

}  // namespace pslab
