#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfe10/core.hpp"
#include "tfe10/errors.hpp"

using namespace tfe10;

TEST_CASE("quadrature integrates constants and smooth decay") {
  CHECK(integrate([](double) { return 1.0; }, QuadratureRule::uniform(0.0, 1.0, 4)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  // Beyond y = 2.5 the integrand is below 1e-300.
  const double v = integrate([](double y) { return std::exp(-std::pow(y, 10.0)); },
                             QuadratureRule::uniform(0.0, 2.5, 20));
  CHECK(v == doctest::Approx(std::tgamma(1.1)).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.951351).epsilon(1e-6));
}

TEST_CASE("graded panels resolve a logarithmic endpoint") {
  const double sing[] = {0.0};
  const auto rule = QuadratureRule::graded(0.0, 1.0, sing);
  CHECK(std::abs(integrate([](double y) { return std::log(y); }, rule) + 1.0) < 1e-8);
  CHECK(rule.refined().panel_count() == 2 * rule.panel_count());
}

TEST_CASE("grid from a rule carries the quadrature weights") {
  const auto g = Grid::from_rule(QuadratureRule::uniform(0.0, 2.0, 3));
  CHECK(g.spacing() == Grid::Spacing::panel_composite);
  CHECK(pairwise_sum(g.weights()) == doctest::Approx(2.0).epsilon(1e-14));
  const auto u = Grid::uniform(0.0, 1.0, 11);
  CHECK(u.size() == 11);
  CHECK(u[10] == 1.0);
}

TEST_CASE("newton solves scalar and planar systems") {
  const auto r = solve_system([](std::span<const double> x) { return std::vector<double>{x[0] - 1.0}; }, {3.0});
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0));

  const auto c = solve_system(
      [](std::span<const double> x) {
        return std::vector<double>{x[0] * x[0] + x[1] * x[1] - 1.0, x[0] - x[1]};
      },
      {1.0, 0.5});
  REQUIRE(c.converged);
  CHECK(c.x[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(c.x[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("conic intersections") {
  const Conic unit{1, 1, 0, 0, 0, -1};
  const Conic shifted{1, 1, -2, 0, 0, 0};  // (x-1)^2 + y^2 = 1
  auto pts = conic_intersections(unit, shifted);
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(p.y) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  }
  CHECK(conic_intersections(unit, Conic{1, 1, 0, 0, 0, -4}).empty());
  CHECK_THROWS_AS(conic_intersections(unit, Conic{2, 2, 0, 0, 0, -2}), InfiniteIntersectionError);

  const auto roots = real_polynomial_roots({-2.0, 0.0, 1.0});
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0]) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("special functions") {
  CHECK(tfe10::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tfe10::gamma(1.1) == doctest::Approx(std::tgamma(1.1)).epsilon(1e-14));
  const double x = std::numbers::pi / 2.0;
  CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x)).epsilon(1e-13));
  CHECK(bessel_j(0.0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
}
