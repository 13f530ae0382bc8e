#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"
#include "pslab/solver.hpp"

using namespace pslab;

namespace {

const Profile1D& profile() {
  static const Profile1D p = solve_heteroclinic(HeteroclinicOptions{});
  return p;
}

double sup_interior_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    if (!a.grid().is_boundary(i)) m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("beta = 0 gives the discrete harmonic extension") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 33);
  const BoundaryData bd = boundary_from_harmonic(1, 1.0, g);
  SolveOptions opts;
  opts.tol = 1e-10;
  const SolveResult res = solve(bd, 0.0, opts);
  const Residual r = residual(res.pair);
  CHECK(r.r_u <= 1e-10);
  CHECK(r.r_v <= 1e-10);
  CHECK(res.pair.beta() == 0.0);
  // Boundary values are kept.
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_boundary(i)) REQUIRE(res.pair.u()[i] == bd.u[i]);
  }
}

TEST_CASE("profile lift is reproduced by the 2D solve") {
  const GridSpec g = GridSpec::cube(2, -8.0, 8.0, 65);
  const BoundaryData bd = boundary_from_profile(profile(), g, LiftMode::GridConsistent);
  SolveOptions opts;
  opts.tol = 1e-10;
  opts.omega = laplace_optimal_omega(g);
  const SolveResult res = solve(bd, 1.0, opts);
  const SolutionPair lift = lift_profile(profile(), g, LiftMode::GridConsistent);
  CHECK(sup_interior_diff(res.pair.u(), lift.u()) <= 5e-6);
  CHECK(sup_interior_diff(res.pair.v(), lift.v()) <= 5e-6);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.is_boundary(i)) continue;
    REQUIRE(res.pair.u()[i] > 0.0);
    REQUIRE(res.pair.v()[i] > 0.0);
  }
  const Residual r = residual(res.pair);
  CHECK(std::max(r.r_u, r.r_v) <= 1e-10);
}

TEST_CASE("residual oracles") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 21);
  SUBCASE("constant pair") {
    const double c = 0.7;
    const auto f = ScalarField::sample(g, [c](const Point&) { return c; });
    const Residual r = residual(SolutionPair(f, f, 3.0));
    CHECK(r.r_u == doctest::Approx(3.0 * c * c * c).epsilon(1e-14));
    CHECK(r.r_v == doctest::Approx(3.0 * c * c * c).epsilon(1e-14));
  }
  SUBCASE("exact positive and negative parts") {
    const double gamma = 1.0 / std::sqrt(std::numbers::pi);
    const auto u = ScalarField::sample(g, [gamma](const Point& x) { return gamma * std::max(x[1], 0.0); });
    const auto v = ScalarField::sample(g, [gamma](const Point& x) { return gamma * std::max(-x[1], 0.0); });
    const Residual r = residual(SolutionPair(u, v, 1.0));
    CHECK(r.r_u == doctest::Approx(gamma / g.h()).epsilon(1e-10));
    CHECK(r.r_v == doctest::Approx(gamma / g.h()).epsilon(1e-10));
    // Away from the kink row the residual vanishes.
    const SolutionPair pair(u, v, 1.0);
    const ScalarField lu = laplacian(u);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Index3 ijk = g.multi_index(i);
      if (g.is_boundary(ijk) || ijk[1] == 10) continue;
      REQUIRE(std::abs(lu[i]) < 1e-10);
    }
  }
}

TEST_CASE("profile boundary data") {
  const GridSpec g = GridSpec::cube(2, -8.0, 8.0, 65);
  const BoundaryData bd = boundary_from_profile(profile(), g);
  CHECK(bd.kind == BoundaryKind::ProfileLift);
  const int n = g.n(0);
  for (int j = 0; j < n; ++j) {
    const double left = bd.u[g.index(Index3{0, j, 0})];
    const double right = bd.u[g.index(Index3{n - 1, j, 0})];
    REQUIRE(left == right);
  }
  for (int i = 0; i < n; ++i) {
    REQUIRE(bd.u[g.index(Index3{i, 0, 0})] == bd.u[g.index(Index3{0, 0, 0})]);
    // The linear asymptote carries the profile offset b.
    REQUIRE(std::abs(bd.u[g.index(Index3{i, n - 1, 0})] - (8.0 + profile().offset)) <= 1e-3);
  }
  CHECK_THROWS_AS(boundary_from_profile(profile(), GridSpec::cube(2, -40.0, 40.0, 33)), DomainError);
}

TEST_CASE("harmonic boundary data") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 11);
  const BoundaryData d1 = boundary_from_harmonic(1, 1.0, g);
  const BoundaryData d2 = boundary_from_harmonic(2, 1.0, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_boundary(i)) {
      REQUIRE(d1.u[i] == 0.0);
      continue;
    }
    const Point x = g.node(i);
    REQUIRE(d1.u[i] == doctest::Approx(std::max(x[1], 0.0)));
    REQUIRE(d1.v[i] == doctest::Approx(std::max(-x[1], 0.0)));
    const double psi = x[0] * x[0] - x[1] * x[1];
    REQUIRE(d2.u[i] == doctest::Approx(std::max(psi, 0.0)));
    REQUIRE(d2.v[i] == doctest::Approx(std::max(-psi, 0.0)));
  }
  CHECK(harmonic_polynomial(1, 2.0, Point{0.5, 0.25, 0.0}, 2) == doctest::Approx(0.5));
  CHECK(harmonic_polynomial(3, 2.0, Point{0.5, 0.25, 0.0}, 2) ==
        doctest::Approx(2.0 * (0.125 - 3.0 * 0.5 * 0.0625)));
  CHECK_THROWS_AS(boundary_from_harmonic(0, 1.0, g), ConfigError);
  CHECK_THROWS_AS(boundary_from_harmonic(2, 1.0, GridSpec::cube(3, -1.0, 1.0, 5)), UnsupportedConfiguration);
}

TEST_CASE("boundary validation and solver failures") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 17);
  BoundaryData bd = boundary_from_harmonic(1, 1.0, g);
  bd.u[0] = -1.0;
  CHECK_THROWS_AS(bd.validate(), ConfigError);

  const BoundaryData good = boundary_from_harmonic(1, 1.0, g);
  SolveOptions opts;
  opts.tol = 1e-14;
  opts.max_sweeps = 20;
  opts.check_every = 5;
  try {
    solve(good, 1.0, opts);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK_FALSE(e.history().empty());
  }
  opts = {};
  opts.omega = 2.5;
  CHECK_THROWS_AS(solve(good, 1.0, opts), ConfigError);
}

TEST_CASE("3D solve converges and stays positive") {
  const GridSpec g = GridSpec::cube(3, -1.0, 1.0, 17);
  const BoundaryData bd = boundary_from_harmonic(1, 1.0, g);
  SolveOptions opts;
  opts.tol = 1e-9;
  const SolveResult res = solve(bd, 4.0, opts);
  const Residual r = residual(res.pair);
  CHECK(std::max(r.r_u, r.r_v) <= 1e-9);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.is_boundary(i)) REQUIRE(res.pair.u()[i] > 0.0);
  }
}

TEST_CASE("solutions are identical across worker counts") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 49);
  const BoundaryData bd = boundary_from_harmonic(2, 1.0, g);
  SolveOptions opts;
  opts.tol = 1e-9;
  const int saved = thread_count();
  set_thread_count(1);
  const SolveResult a = solve(bd, 10.0, opts);
  set_thread_count(5);
  const SolveResult b = solve(bd, 10.0, opts);
  set_thread_count(saved);
  CHECK(a.sweeps == b.sweeps);
  bool same = true;
  for (std::size_t i = 0; i < g.size(); ++i) same = same && a.pair.u()[i] == b.pair.u()[i] && a.pair.v()[i] == b.pair.v()[i];
  CHECK(same);
}

TEST_CASE("omega choices") {
  CHECK(default_omega(2) == doctest::Approx(1.7));
  CHECK(default_omega(3) == doctest::Approx(1.5));
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 129);
  const double w = laplace_optimal_omega(g);
  CHECK(w > 1.9);
  CHECK(w < 2.0);
}
