#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pslab/error.hpp"
#include "pslab/segregation.hpp"

using namespace pslab;

namespace {

const GridSpec& grid() {
  static const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 65);
  return g;
}

SweepOptions sweep_options() {
  SweepOptions opts;
  opts.solve.tol = 1e-10;
  opts.solve.omega = laplace_optimal_omega(grid());
  return opts;
}

const SegregationTable& table() {
  static const SegregationTable t = sweep(boundary_from_harmonic(1, 1.0, grid()), {0.0, 1.0, 4.0, 16.0, 64.0},
                                          sweep_options());
  return t;
}

}  // namespace

TEST_CASE("sweep produces one converged row per beta") {
  const SegregationTable& t = table();
  REQUIRE(t.complete);
  REQUIRE(t.rows.size() == 5);
  REQUIRE(t.solutions.size() == 5);
  CHECK(t.alpha == doctest::Approx(0.9));
  for (const SegregationRow& row : t.rows) CHECK(row.residual <= 1e-10);
}

TEST_CASE("decoupled case: u - v is discrete harmonic") {
  const SegregationRow& row = table().rows.front();
  CHECK(row.beta == 0.0);
  CHECK(row.interaction == 0.0);
  CHECK(row.harm_residual <= 2e-10);
}

TEST_CASE("coexistence shrinks as beta grows") {
  const SegregationTable& t = table();
  for (std::size_t k = 2; k < t.rows.size(); ++k) CHECK(t.rows[k].sup_uv < t.rows[k - 1].sup_uv);
  double prev = interface_width(t.solutions[1], 0.02);
  for (std::size_t k = 2; k < t.solutions.size(); ++k) {
    const double w = interface_width(t.solutions[k], 0.02);
    CHECK(w <= prev);
    prev = w;
  }
  double lo = t.rows[1].holder;
  double hi = lo;
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    lo = std::min(lo, t.rows[k].holder);
    hi = std::max(hi, t.rows[k].holder);
  }
  CHECK(hi / lo <= 3.0);
}

TEST_CASE("metrics agree with the table") {
  const SegregationTable& t = table();
  const SegregationRow again = segregation_metrics(t.solutions[3], 0.9, 0.1);
  CHECK(again.sup_uv == t.rows[3].sup_uv);
  CHECK(again.interaction == t.rows[3].interaction);
  CHECK(again.harm_residual == t.rows[3].harm_residual);
  CHECK(again.holder == t.rows[3].holder);
}

TEST_CASE("Hölder quotient oracles") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 81);
  const double gamma = 1.0 / std::sqrt(std::numbers::pi);
  const ScalarField lin = ScalarField::sample(g, [&](const Point& x) { return gamma * x[1]; });
  // The sampled box keeps 10 cells from each face; the e_N line endpoints are
  // the widest vertical pair.
  const double D = (g.n(1) - 1 - 20) * g.h();
  CHECK(holder_quotient(lin, 0.5, 0.1) == doctest::Approx(gamma * std::sqrt(D)).epsilon(1e-12));

  const ScalarField flat = ScalarField::sample(g, [](const Point&) { return 2.0; });
  CHECK(holder_quotient(flat, 0.9, 0.1) == 0.0);

  CHECK(holder_quotient(lin, 0.5, 0.1, 128, 7) == holder_quotient(lin, 0.5, 0.1, 128, 7));
  CHECK_THROWS_AS(holder_quotient(lin, 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(holder_quotient(lin, 0.0, 0.1), ConfigError);
  CHECK_THROWS_AS(holder_quotient(lin, 0.5, g.h()), ConfigError);
}

TEST_CASE("interface width edge cases") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 41);
  const SolutionPair lin(ScalarField::sample(g, [](const Point& x) { return std::max(x[1], 0.0); }),
                         ScalarField::sample(g, [](const Point& x) { return std::max(-x[1], 0.0); }), 1.0);
  CHECK(interface_width(lin, 1e-9) == 0.0);
  const SolutionPair& solved = table().solutions[1];
  CHECK(interface_width(solved, table().rows[1].sup_uv * 1.01) == 0.0);
  CHECK(interface_width(solved, 1e-6) > 0.0);
  CHECK_THROWS_AS(interface_width(solved, 0.0), ConfigError);
}

TEST_CASE("sweep argument checks and partial tables") {
  const BoundaryData bd = boundary_from_harmonic(1, 1.0, grid());
  CHECK_THROWS_AS(sweep(bd, {1.0, 4.0}, sweep_options()), ConfigError);
  CHECK_THROWS_AS(sweep(bd, {1.0, 4.0, 4.0}, sweep_options()), ConfigError);
  CHECK_THROWS_AS(sweep(bd, {-1.0, 4.0, 8.0}, sweep_options()), ConfigError);
  SweepOptions bad_alpha = sweep_options();
  bad_alpha.alpha = 1.5;
  CHECK_THROWS_AS(sweep(bd, {1.0, 4.0, 8.0}, bad_alpha), ConfigError);

  SweepOptions starved = sweep_options();
  starved.solve.max_sweeps = 10;
  starved.solve.tol = 1e-13;
  const SegregationTable partial = sweep(bd, {1.0, 4.0, 8.0}, starved);
  CHECK_FALSE(partial.complete);
  CHECK_FALSE(partial.failure.empty());
  CHECK(partial.rows.size() < 3);
}
