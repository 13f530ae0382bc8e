#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pslab/asymptotics.hpp"
#include "pslab/error.hpp"
#include "pslab/solver.hpp"

using namespace pslab;

namespace {

const double kGamma = 1.0 / std::sqrt(std::numbers::pi);

SolutionPair gamma_linear_pair(int n = 81, double half_width = 2.0) {
  const GridSpec g = GridSpec::cube(2, -half_width, half_width, n);
  return SolutionPair(ScalarField::sample(g, [](const Point& x) { return kGamma * std::max(x[1], 0.0); }),
                      ScalarField::sample(g, [](const Point& x) { return kGamma * std::max(-x[1], 0.0); }), 1.0);
}

const Profile1D& profile() {
  static const Profile1D p = solve_heteroclinic(HeteroclinicOptions{});
  return p;
}

const SolutionPair& lifted() {
  static const SolutionPair p = lift_profile(profile(), GridSpec::cube(2, -8.0, 8.0, 65), LiftMode::GridConsistent);
  return p;
}

}  // namespace

TEST_CASE("decay fit on an exact exponential") {
  const GridSpec g = GridSpec::cube(2, -4.0, 4.0, 41);
  const SolutionPair pair(ScalarField::sample(g, [](const Point&) { return 1.0; }),
                          ScalarField::sample(g, [](const Point& x) { return std::exp(-x[1]); }), 1.0);
  const DecayFit fit = decay_fit(pair, 1.0, 2.0, 0.5, 3.5);
  CHECK(fit.rate == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.rows_used >= 4);
  CHECK_THROWS_AS(decay_fit(pair, 1.0, 2.0, 3.0, 9.0), DomainError);
}

TEST_CASE("decay fit needs a nonzero cross term") {
  CHECK_THROWS_AS(decay_fit(gamma_linear_pair(), 1.0, 2.0, 0.5, 1.5), InsufficientData);
}

TEST_CASE("decay fit on the lifted profile") {
  const DecayFit fit = decay_fit(lifted(), 1.0, 2.0, 2.0, 4.0);
  CHECK(fit.rate < 0.0);
  CHECK(fit.r_squared >= 0.99);
  const double M = far_field_height(lifted(), 1.0, 2.0);
  CHECK(M >= 0.0);
  CHECK(M < 8.0);
  CHECK(far_field_height(lifted(), 1.0, 2.0, false) == doctest::Approx(M));
}

TEST_CASE("cosh decay oracle") {
  const CoshOracle a = cosh_decay_oracle(1.0, 1.0, 5.0);
  CHECK(a.exact_mid == doctest::Approx(1.0 / std::cosh(5.0)));
  CHECK(a.numeric_mid == doctest::Approx(0.013476).epsilon(1e-4));
  CHECK(a.relative_error <= 5.0 * a.h * a.h);
  const CoshOracle b = cosh_decay_oracle(4.0, 1.0, 5.0);
  CHECK(b.numeric_mid == doctest::Approx(9.0800e-5).epsilon(1e-4));
  CHECK(b.within_bound);
  const CoshOracle scaled = cosh_decay_oracle(4.0, 10.0, 5.0);
  CHECK(scaled.numeric_mid == doctest::Approx(10.0 * b.numeric_mid).epsilon(1e-13));
  // c in e^{-c sqrt(K) L}; the decay rate is c sqrt(K).
  for (double K : {1.0, 4.0, 9.0}) CHECK(cosh_rate_fit(K, 1.0, {3.0, 5.0}) * std::sqrt(K) >= 0.9 * std::sqrt(K));
  CHECK_THROWS_AS(cosh_decay_oracle(-1.0, 1.0, 5.0), ConfigError);
}

TEST_CASE("moving planes") {
  SUBCASE("linear pair never violates") {
    const SolutionPair pair = gamma_linear_pair();
    for (double lambda : plane_heights(pair.grid(), 9)) {
      const MovingPlaneReport r = moving_plane_check(pair, lambda);
      CHECK(r.max_violation_u == 0.0);
      CHECK(r.max_violation_v == 0.0);
      CHECK(r.checked_nodes > 0);
    }
  }
  SUBCASE("lifted heteroclinic") {
    for (double lambda : plane_heights(lifted().grid(), 25)) {
      const MovingPlaneReport r = moving_plane_check(lifted(), lambda);
      CHECK(r.max_violation_u <= 1e-10);
      CHECK(r.max_violation_v <= 1e-10);
    }
  }
  SUBCASE("sign-violating witness") {
    const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 21);
    const ScalarField u = ScalarField::sample(g, [](const Point& x) { return -x[1]; });
    const MovingPlaneReport r = moving_plane_check(u, 0.2);
    CHECK(r.max_violation_u > 0.0);
    REQUIRE(r.worst_node.has_value());
    CHECK((*r.worst_node)[1] >= 0.2);
  }
  const auto hs = plane_heights(GridSpec::cube(2, -1.0, 1.0, 11), 3);
  REQUIRE(hs.size() == 3);
  CHECK(hs[1] == doctest::Approx(0.0));
  CHECK_THROWS_AS(moving_plane_check(gamma_linear_pair(), 5.0), DomainError);
}

TEST_CASE("directional monotonicity") {
  const SolutionPair pair = gamma_linear_pair();
  const ConeProbe up = directional_monotonicity(pair, Vec3{0.0, 1.0, 0.0}, true, 0.1);
  CHECK(up.min_derivative == doctest::Approx(kGamma));
  const ConeProbe side = directional_monotonicity(pair, Vec3{1.0, 0.0, 0.0}, true, 0.1);
  CHECK(side.min_derivative == doctest::Approx(0.0));
  CHECK_THROWS_AS(directional_monotonicity(pair, Vec3{1.0, 1.0, 0.0}, true, 0.1), ConfigError);
  CHECK_THROWS_AS(directional_monotonicity(pair, Vec3{0.0, 1.0, 0.0}, true, 5.0), DomainError);

  const double M = far_field_height(lifted(), 1.0, 2.0);
  const double s = std::numbers::sqrt2 / 2.0;
  const ConeProbe tilted = directional_monotonicity(lifted(), Vec3{s, s, 0.0}, true, M);
  CHECK(tilted.min_derivative > 0.0);
  const ConeProbe lower = directional_monotonicity(lifted(), Vec3{s, s, 0.0}, false, M);
  CHECK(lower.min_derivative > 0.0);
}

TEST_CASE("one-dimensionality defect") {
  CHECK(one_dimensionality_defect(lifted()) == 0.0);
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 41);
  const auto psi = [](const Point& x) { return harmonic_polynomial(2, 1.0, x, 2); };
  const SolutionPair quad(ScalarField::sample(g, [&](const Point& x) { return std::max(psi(x), 0.0); }),
                          ScalarField::sample(g, [&](const Point& x) { return std::max(-psi(x), 0.0); }), 1.0);
  CHECK(one_dimensionality_defect(quad) > 0.1);
}

TEST_CASE("level sets of u - v") {
  const SolutionPair pair = gamma_linear_pair();
  const double h = pair.grid().h();
  const LevelSetExtent e = level_set_extent(pair, 0.1);
  CHECK_FALSE(e.empty);
  CHECK(e.all_columns_hit);
  CHECK(e.max_xN <= 0.1 / kGamma);
  CHECK(e.max_xN > 0.1 / kGamma - h);
  CHECK(e.min_xN == doctest::Approx(-e.max_xN));

  const LevelSetExtent band = level_set_extent(lifted(), 0.5);
  CHECK(band.all_columns_hit);
  CHECK(band.min_xN < profile().t0);
  CHECK(band.max_xN > profile().t0);
  const LevelSetExtent narrow = level_set_extent(lifted(), 0.1);
  CHECK(narrow.max_xN - narrow.min_xN <= band.max_xN - band.min_xN);

  // No node sits exactly on the interface for an even node count.
  const LevelSetExtent none = level_set_extent(gamma_linear_pair(80), 1e-6);
  CHECK(none.empty);
  CHECK_THROWS_AS(level_set_extent(pair, 0.0), ConfigError);
}

TEST_CASE("strip bounds") {
  const StripBounds b = strip_bound_scan(gamma_linear_pair(), 1.0);
  CHECK(b.sup_u_plus_grad == doctest::Approx(2.0 * kGamma));
  CHECK(b.sup_v_plus_grad == doctest::Approx(2.0 * kGamma));

  const StripBounds l = strip_bound_scan(lifted(), 0.0);
  CHECK(l.sup_u_plus_grad > profile_value(profile(), profile().u, 0.0));
  CHECK(l.sup_u_plus_grad < 2.0);
}

TEST_CASE("sector masks") {
  const SectorMask up{Point{}, 2.0, 1.0, 1};
  CHECK(up.contains(Point{0.0, 1.5, 0.0}, 2));
  CHECK_FALSE(up.contains(Point{0.0, -1.5, 0.0}, 2));
  CHECK_FALSE(up.contains(Point{0.0, 0.5, 0.0}, 2));
  CHECK_FALSE(up.contains(Point{1.4, 0.5, 0.0}, 2));
  const SectorMask down{Point{}, 2.0, 1.0, -1};
  CHECK(down.contains(Point{0.2, -1.5, 0.0}, 2));
}
