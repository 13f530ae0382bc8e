#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pslab/asymptotics.hpp"
#include "pslab/error.hpp"
#include "pslab/ode1d.hpp"

using namespace pslab;

namespace {

const Profile1D& reference_profile() {
  static const Profile1D p = solve_heteroclinic(HeteroclinicOptions{});
  return p;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("heteroclinic profile: convergence, positivity, monotonicity") {
  const Profile1D& p = reference_profile();
  CHECK(p.residual_norm <= 1e-10);
  CHECK(p.u.front() == 0.0);
  CHECK(p.v.back() == 0.0);
  for (int i = 1; i + 1 < p.n; ++i) {
    REQUIRE(p.u[i] > 0.0);
    REQUIRE(p.v[i] > 0.0);
  }
  for (int i = 0; i + 1 < p.n; ++i) {
    REQUIRE(p.u[i + 1] > p.u[i]);
    REQUIRE(p.v[i + 1] < p.v[i]);
  }
  // Linear asymptote u ≈ t + b at the right end.
  CHECK((p.u[p.n - 1] - p.u[p.n - 2]) / p.h == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(p.offset > 0.0);
}

TEST_CASE("heteroclinic profile: reflection symmetry about the center") {
  const Profile1D& p = reference_profile();
  const SymmetryCenter c = center_and_symmetry_defect(p);
  CHECK(std::abs(c.t0) <= p.h);
  CHECK(c.defect <= 1e-8);
  CHECK(profile_value(p, p.u, 0.0) == doctest::Approx(profile_value(p, p.v, 0.0)).epsilon(1e-9));
}

TEST_CASE("shifted boundary data translate the center") {
  HeteroclinicOptions opts;
  opts.shift = 1.5;
  const Profile1D p = solve_heteroclinic(opts);
  const SymmetryCenter c = center_and_symmetry_defect(p);
  CHECK(std::abs(c.t0 - 1.5) <= 2.0 * p.h);
  CHECK(c.defect <= 1e-6);
}

TEST_CASE("center detection rejects profiles without a crossing") {
  Profile1D p = reference_profile();
  p.v = p.u;
  CHECK_THROWS_AS(center_and_symmetry_defect(p), StructureError);
}

TEST_CASE("scaling invariance matches an independent solve") {
  const Profile1D& p = reference_profile();
  SUBCASE("lambda = 1 is the identity") {
    const Profile1D q = rescale_profile(p, 1.0);
    CHECK(sup_diff(q.u, p.u) == 0.0);
    CHECK(q.slope == p.slope);
  }
  SUBCASE("slope 2 solve") {
    // (λu(λt), λv(λt)) has asymptotic slope λ², so slope 2 is λ = √2.
    const double lambda = std::numbers::sqrt2;
    HeteroclinicOptions opts;
    opts.L = p.L / lambda;
    opts.slope = 2.0;
    const Profile1D direct = solve_heteroclinic(opts);
    const Profile1D scaled = rescale_profile(p, lambda);
    CHECK(scaled.slope == doctest::Approx(2.0));
    CHECK(scaled.L == doctest::Approx(direct.L));
    CHECK(sup_diff(scaled.u, direct.u) <= 1e-6);
    CHECK(sup_diff(scaled.v, direct.v) <= 1e-6);
    CHECK(scaled.offset == doctest::Approx(direct.offset).epsilon(1e-6));
  }
  CHECK_THROWS_AS(rescale_profile(p, 0.0), DomainError);
}

TEST_CASE("first integral") {
  SUBCASE("converged profile conserves it") {
    const EnergyInvariant e = energy_invariant(reference_profile());
    CHECK(e.max_deviation <= 1e-6);
    CHECK(e.raw_max_deviation >= e.max_deviation);
  }
  SUBCASE("exact positive and negative parts") {
    Profile1D p;
    p.L = 10.0;
    p.n = 2001;
    p.h = 2.0 * p.L / (p.n - 1);
    const double gamma = 1.0 / std::sqrt(std::numbers::pi);
    p.slope = gamma;
    for (int i = 0; i < p.n; ++i) {
      const double t = p.t(i);
      p.u.push_back(gamma * std::max(t, 0.0));
      p.v.push_back(gamma * std::max(-t, 0.0));
    }
    const EnergyInvariant e = energy_invariant(p);
    for (int i = 1; i + 1 < p.n; ++i) {
      if (std::abs(p.t(i)) <= p.h * 1.5) continue;
      REQUIRE(e.series[i - 1] == doctest::Approx(gamma * gamma).epsilon(1e-12));
    }
  }
  SUBCASE("one perturbed node is detected") {
    Profile1D p = reference_profile();
    p.u[p.n / 2 + 17] += 1e-3;
    CHECK(energy_invariant(p).max_deviation > 1e-4);
  }
}

TEST_CASE("cross term decays on the profile") {
  const Profile1D& p = reference_profile();
  const double mid = profile_value(p, p.u, p.L / 2) * std::pow(profile_value(p, p.v, p.L / 2), 2);
  CHECK(mid > 0.0);
  const double c = -std::log(mid) / (p.L / 2);
  CHECK(c > 0.0);

  const DecayFit fit = decay_fit(profile_pair(p), 1.0, 2.0, 7.5, 15.0);
  CHECK(fit.rate < 0.0);
  CHECK(fit.r_squared >= 0.99);
}

TEST_CASE("dirichlet solve") {
  SUBCASE("beta = 0 gives straight lines") {
    std::vector<double> u(101, 0.0);
    std::vector<double> v(101, 0.0);
    u.back() = 2.0;
    v.front() = 3.0;
    const DirichletSolve1D s = solve_dirichlet_1d(u, v, 0.01, 0.0, 1e-12, 20);
    for (int i = 0; i <= 100; ++i) {
      CHECK(s.u[i] == doctest::Approx(0.02 * i).epsilon(1e-10));
      CHECK(s.v[i] == doctest::Approx(3.0 - 0.03 * i).epsilon(1e-10));
    }
  }
  SUBCASE("too few iterations throws with a history") {
    const Profile1D& p = reference_profile();
    std::vector<double> u(p.n, 0.0);
    std::vector<double> v(p.n, 0.0);
    u.back() = p.u.back();
    v.front() = p.v.front();
    for (int i = 1; i + 1 < p.n; ++i) {
      u[i] = u.back() * i / (p.n - 1.0);
      v[i] = v.front() * (1.0 - i / (p.n - 1.0));
    }
    try {
      solve_dirichlet_1d(u, v, p.h, 1.0, 1e-12, 1);
      FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
      CHECK_FALSE(e.history().empty());
    }
  }
  CHECK_THROWS_AS(solve_dirichlet_1d({0.0, 1.0}, {1.0, 0.0}, 0.1, 1.0, 1e-9, 5), ConfigError);
}

TEST_CASE("option validation") {
  HeteroclinicOptions opts;
  opts.L = 5.0;
  CHECK_THROWS_AS(solve_heteroclinic(opts), ConfigError);
  opts = {};
  opts.n = 6000;
  CHECK_THROWS_AS(solve_heteroclinic(opts), ConfigError);
  opts = {};
  opts.slope = -1.0;
  CHECK_THROWS_AS(solve_heteroclinic(opts), ConfigError);
}
