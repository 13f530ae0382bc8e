#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pslab/error.hpp"
#include "pslab/field.hpp"
#include "pslab/parallel.hpp"
#include "pslab/quadrature.hpp"

using namespace pslab;
using std::numbers::pi;

namespace {

double max_interior_abs(const ScalarField& f, double target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.grid().size(); ++i) {
    if (f.grid().is_boundary(i)) continue;
    worst = std::max(worst, std::abs(f[i] - target));
  }
  return worst;
}

SolutionPair constant_pair(const GridSpec& g, double c) {
  return SolutionPair(ScalarField::sample(g, [c](const Point&) { return c; }),
                      ScalarField::sample(g, [c](const Point&) { return c; }), 1.0);
}

}  // namespace

TEST_CASE("grid construction rejects bad boxes") {
  const std::vector<double> lo{0.0, 0.0};
  const std::vector<double> hi{1.0, 2.0};
  const std::vector<int> n{11, 11};
  CHECK_THROWS_AS(GridSpec::make(2, lo, hi, n), ConfigError);
  CHECK_THROWS_AS(GridSpec::cube(4, -1.0, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(GridSpec::cube(2, 1.0, -1.0, 5), ConfigError);
  CHECK_THROWS_AS(GridSpec::cube(2, -1.0, 1.0, 2), ConfigError);

  const GridSpec g = GridSpec::cube(3, -1.0, 1.0, 5);
  CHECK(g.size() == 125);
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.normal_axis() == 2);
  for (std::size_t i = 0; i < g.size(); i += 7) CHECK(g.index(g.multi_index(i)) == i);
  CHECK(g.is_boundary(Index3{0, 2, 2}));
  CHECK_FALSE(g.is_boundary(Index3{1, 2, 3}));
  CHECK(g.max_radius(Point{0.0, 0.0, 0.0}, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("fields and pairs validate their values") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 5);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(24, 0.0)), ConfigError);
  std::vector<double> bad(25, 1.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(ScalarField(g, bad), ConfigError);

  const ScalarField neg = ScalarField::sample(g, [](const Point& x) { return x[1]; });
  const ScalarField pos = ScalarField::sample(g, [](const Point&) { return 1.0; });
  CHECK_THROWS_AS(SolutionPair(neg, pos, 1.0), ConfigError);
  CHECK_THROWS_AS(SolutionPair(pos, pos, -1.0), ConfigError);
  CHECK_NOTHROW(SolutionPair(pos, pos, 0.0));
  CHECK_NOTHROW(SolutionPair::unchecked(neg, pos, 1.0));

  const ScalarField other = ScalarField::sample(GridSpec::cube(2, -1.0, 1.0, 7), [](const Point&) { return 1.0; });
  CHECK_THROWS_AS(SolutionPair(pos, other, 1.0), ConfigError);
}

TEST_CASE("laplacian stencil oracles") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 21);
  SUBCASE("constants are harmonic") {
    CHECK(max_interior_abs(laplacian(ScalarField::sample(g, [](const Point&) { return 3.5; })), 0.0) == 0.0);
  }
  SUBCASE("x^2 + y^2 gives 4") {
    const auto f = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0] + x[1] * x[1]; });
    CHECK(max_interior_abs(laplacian(f), 4.0) < 1e-11);
  }
  SUBCASE("x^2 - y^2 gives 0") {
    const auto f = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0] - x[1] * x[1]; });
    CHECK(max_interior_abs(laplacian(f), 0.0) < 1e-11);
  }
  SUBCASE("boundary nodes are zeroed") {
    const auto f = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0]; });
    CHECK(laplacian(f).at(Index3{0, 5, 0}) == 0.0);
  }
}

TEST_CASE("multilinear interpolation") {
  const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 11);
  const double h = g.h();
  const auto lin = ScalarField::sample(g, [](const Point& x) { return 2.0 * x[0] + 3.0 * x[1]; });
  const auto sq = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0]; });

  CHECK(interpolate(sq, g.node(Index3{3, 7, 0})) == sq.at(Index3{3, 7, 0}));
  for (const Point p : {Point{0.13, -0.41, 0.0}, Point{-0.97, 0.88, 0.0}, Point{0.5, 0.05, 0.0}}) {
    CHECK(interpolate(lin, p) == doctest::Approx(2.0 * p[0] + 3.0 * p[1]).epsilon(1e-13));
    const Vec3 grad = interpolate_gradient(lin, p);
    CHECK(grad[0] == doctest::Approx(2.0));
    CHECK(grad[1] == doctest::Approx(3.0));
  }
  const double xc = g.coord(0, 6) + 0.5 * h;
  CHECK(interpolate(sq, Point{xc, 0.2, 0.0}) == doctest::Approx(xc * xc + h * h / 4.0).epsilon(1e-13));
  CHECK_THROWS_AS(interpolate(sq, Point{1.5, 0.0, 0.0}), DomainError);
}

TEST_CASE("nodal gradient is exact on quadratics") {
  const GridSpec g = GridSpec::cube(3, -1.0, 1.0, 9);
  const auto f = ScalarField::sample(g, [](const Point& x) { return x[0] * x[0] + x[1] * x[2]; });
  const Index3 ijk{2, 5, 6};
  const Point x = g.node(ijk);
  const Vec3 grad = nodal_gradient(f, ijk);
  CHECK(grad[0] == doctest::Approx(2.0 * x[0]));
  CHECK(grad[1] == doctest::Approx(x[2]));
  CHECK(grad[2] == doctest::Approx(x[1]));
}

TEST_CASE("sphere integrals") {
  const GridSpec g = GridSpec::cube(2, -2.0, 2.0, 41);
  const SolutionPair pair = constant_pair(g, 1.0);
  const auto quad = SphereQuadrature::standard(2);
  const Point x0{0.1, -0.2, 0.0};
  const double r = 0.5;
  CHECK(sphere_integral([](const Sample&) { return 1.0; }, pair, x0, r, quad) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(sphere_integral([](const Sample& s) { return s.rel[1] * s.rel[1]; }, pair, x0, r, quad) ==
        doctest::Approx(pi * r * r * r).epsilon(1e-12));
  CHECK(std::abs(sphere_integral([](const Sample& s) { return s.rel[1]; }, pair, x0, r, quad)) < 1e-12);

  const GridSpec g3 = GridSpec::cube(3, -2.0, 2.0, 9);
  const SolutionPair pair3 = constant_pair(g3, 1.0);
  const auto quad3 = SphereQuadrature::standard(3);
  CHECK(quad3.measure() == doctest::Approx(4.0 * pi).epsilon(1e-12));
  CHECK(std::abs(sphere_integral([](const Sample& s) { return s.rel[2]; }, pair3, Point{}, 1.0, quad3)) < 1e-12);
  CHECK(sphere_integral([](const Sample& s) { return s.rel[2] * s.rel[2]; }, pair3, Point{}, 1.0, quad3) ==
        doctest::Approx(4.0 * pi / 3.0).epsilon(1e-12));
}

TEST_CASE("shell ball integrals") {
  const auto one = [](const Sample&) { return 1.0; };
  SUBCASE("2D kernel and plain area") {
    const GridSpec g = GridSpec::cube(2, -2.0, 2.0, 41);
    const SolutionPair pair = constant_pair(g, 1.0);
    const auto quad = SphereQuadrature::standard(2);
    CHECK(shell_ball_integral(one, pair, Point{}, 1.0, quad, 64) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(ball_integral(one, pair, Point{}, 1.0, quad, 64) == doctest::Approx(pi).epsilon(1e-12));
    const double xn2 = ball_integral([](const Sample& s) { return s.rel[1] * s.rel[1]; }, pair, Point{}, 1.0, quad, 400);
    CHECK(xn2 == doctest::Approx(pi / 4.0).epsilon(1e-5));
  }
  SUBCASE("3D kernel integral") {
    const GridSpec g = GridSpec::cube(3, -2.0, 2.0, 9);
    const SolutionPair pair = constant_pair(g, 1.0);
    const auto quad = SphereQuadrature::sphere(16, 32);
    CHECK(shell_ball_integral(one, pair, Point{}, 1.0, quad, 32) == doctest::Approx(2.0 * pi).epsilon(1e-12));
  }
  SUBCASE("balls leaving the box are rejected") {
    const GridSpec g = GridSpec::cube(2, -1.0, 1.0, 21);
    const SolutionPair pair = constant_pair(g, 1.0);
    CHECK_THROWS_AS(ball_integral(one, pair, Point{}, 1.0, SphereQuadrature::standard(2), 16), DomainError);
  }
}

TEST_CASE("pairwise sums do not depend on the worker count") {
  std::vector<double> xs(100003);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::sin(0.37 * static_cast<double>(i)) * 1e-3 + 1.0;
  const int saved = thread_count();
  set_thread_count(1);
  const double a = pairwise_sum(xs);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) hits[i] += 1;
  });
  set_thread_count(7);
  const double b = pairwise_sum(xs);
  parallel_for(hits.size(), [&](std::size_t b0, std::size_t e0) {
    for (std::size_t i = b0; i < e0; ++i) hits[i] += 1;
  });
  set_thread_count(saved);
  CHECK(a == b);
  for (int h : hits) CHECK(h == 2);
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(8, x, w);
  double s0 = 0.0;
  double s6 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s6 += w[i] * std::pow(x[i], 6);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s6 == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
  CHECK(unit_sphere_measure(2) == doctest::Approx(2.0 * pi));
  CHECK(unit_sphere_measure(3) == doctest::Approx(4.0 * pi));
}
