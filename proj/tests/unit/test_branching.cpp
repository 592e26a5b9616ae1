#include <doctest.h>

#include <cmath>

#include "tfe10/branching.hpp"

using namespace tfe10;
using namespace tfe10::branching;

TEST_CASE("mu10 in one dimension") {
  const auto r = mu10(1);
  CHECK(r.target == doctest::Approx(-0.01));
  CHECK(std::abs(r.mu10 - r.target) < 1e-3);
  CHECK(std::abs(r.divergence_term) < 1e-3);
}

TEST_CASE("dipole pairings in two dimensions") {
  const RadialTable table(branching_kernel(2));
  CHECK(table.mass() == doctest::Approx(1.0).epsilon(1e-6));
  const auto c = dipole_coefficients(table);
  CHECK(c.alpha1 == doctest::Approx(0.3));
  CHECK(c.nondegenerate);
  const auto& P = c.pairings.P;
  REQUIRE(P.size() == 2);
  CHECK(P[0][0] == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(P[1][1] == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(std::abs(P[0][1]) < 1e-8);
}

TEST_CASE("quadratic branch counts") {
  auto r = quadratic_branch_count({1.0, -1.0, 0.2});
  REQUIRE(r.count);
  CHECK(*r.count == 2);
  REQUIRE(r.roots.size() == 2);
  CHECK(r.roots[0] == doctest::Approx((5.0 - std::sqrt(5.0)) / 10.0));
  CHECK(r.roots[1] == doctest::Approx((5.0 + std::sqrt(5.0)) / 10.0));

  r = quadratic_branch_count({1.0, -1.0, 0.25});
  REQUIRE(r.roots.size() == 1);
  CHECK(r.roots[0] == doctest::Approx(0.5).epsilon(1e-7));

  r = quadratic_branch_count({1.0, 0.0, 1.0});
  REQUIRE(r.count);
  CHECK(*r.count == 0);
}

TEST_CASE("conic classification and counts") {
  CHECK(classify_conic(Conic{1, 1, 0, 0, 0, -1}).type == ConicType::circle);
  CHECK(classify_conic(Conic{1, -2, 0, 0, 0, -1}).type == ConicType::hyperbola);
  CHECK(classify_conic(Conic{1, -1, 0, 0, 0, -1}).type == ConicType::rectangular_hyperbola);
  CHECK(classify_conic(Conic{1, 2, 0, 0, 0, -1}).type == ConicType::ellipse);
  CHECK(classify_conic(Conic{0, 0, 1, 1, 0, -1}).type == ConicType::not_a_conic);

  const auto r = conic_branch_count(Conic{1, 1, 0, 0, 0, -1}, Conic{1, 1, -2, 0, 0, 0});
  REQUIRE(r.count);
  CHECK(*r.count == 2);
  CHECK(r.within_bound);
}
