#include <doctest.h>

#include <cmath>

#include "tfe10/unstable.hpp"

using namespace tfe10;
using namespace tfe10::unstable;

TEST_CASE("unstable exponents") {
  auto e = exponents_unstable(0.0, 2.0);
  CHECK(e.alpha == doctest::Approx(0.8));
  CHECK(e.beta == doctest::Approx(0.1));
  e = exponents_unstable(1.0, 10.0);
  CHECK(e.alpha == doctest::Approx(1.0 / 11.0));
  e = exponents_unstable(0.3, 3.0);
  CHECK(e.alpha * 0.3 + 10.0 * e.beta == doctest::Approx(1.0));
  CHECK(e.identities_ok);
}

TEST_CASE("critical exponent") {
  CHECK(p_critical(1.0, 2) == doctest::Approx(6.0));
  CHECK(p_critical(0.0, 1) == doctest::Approx(9.0));
  CHECK(p_critical(0.0, 8) == doctest::Approx(2.0));
}

TEST_CASE("symbol and unstable band") {
  CHECK(unstable_symbol(1.0) == doctest::Approx(0.0));
  CHECK(unstable_symbol(0.5) == doctest::Approx(0.24902).epsilon(1e-5));
  const auto b = unstable_band();
  CHECK(b.argmax == doctest::Approx(std::pow(0.2, 0.125)));
  CHECK(b.max_value == doctest::Approx(unstable_symbol(b.argmax)));
}

TEST_CASE("unstable profile at n = 1") {
  const auto r = solve_f0_unstable(1.0, 1);
  REQUIRE(r.profile.converged);
  CHECK(r.path.back() == 1.0);
  CHECK(r.profile.residual_norm <= 1e-8);
  REQUIRE(r.profile.y0);
  CHECK(*r.profile.y0 == doctest::Approx(5.27586).epsilon(1e-5));
}
