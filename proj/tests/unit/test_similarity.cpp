#include <doctest.h>

#include <cmath>

#include "tfe10/similarity.hpp"
#include "tfe10/spectral.hpp"

using namespace tfe10;
using namespace tfe10::similarity;

TEST_CASE("scaling exponents") {
  CHECK(alpha0(0.0, 1).alpha == doctest::Approx(0.1));
  CHECK(alpha0(1.0, 1).alpha == doctest::Approx(1.0 / 11.0));
  CHECK(alpha0(0.0, 2).alpha == doctest::Approx(0.2));
  const auto e = alpha0(0.7, 3);
  CHECK(e.alpha == 3.0 / (10.0 + 3.0 * 0.7));
  CHECK(alpha_k_linear(0, 1) == doctest::Approx(0.1));
  CHECK(alpha_k_linear(3, 1) == doctest::Approx(0.4));
  CHECK(alpha_k_linear(3, 2) == doctest::Approx(0.5));
}

TEST_CASE("far-field bundle") {
  const auto b = asymptotic_bundle(0.1);
  CHECK(b.omegas.size() == 5);
  CHECK(b.decay_constant == doctest::Approx(spectral::decay_constant_formula()).epsilon(1e-12));
  CHECK(b.decay_constant == doctest::Approx(0.12100).epsilon(1e-4));
  CHECK(b.amplitude_exponent == doctest::Approx(-4.0 / 9.0));
}

TEST_CASE("thin-film profile at n = 1") {
  const auto f = solve_f0(1.0, 1);
  REQUIRE(f.converged);
  REQUIRE(f.y0);
  CHECK(*f.y0 == doctest::Approx(7.75207).epsilon(1e-5));
  CHECK(f.residual_norm <= 1e-8);
  CHECK(f.interior_residual <= 1e-6);
  CHECK(f.alpha == doctest::Approx(1.0 / 11.0));
  CHECK(f.profile.f.front() == doctest::Approx(1.0));
  CHECK(mass(f.profile) != 0.0);
  CHECK(check_mass_conservation(f.profile, alpha0(1.0, 1)));
  CHECK_FALSE(check_mass_conservation(f.profile, SimilarityExponents{0.2, 0.1, 1.0, 1}));
}

TEST_CASE("linear eigenfamily") {
  const auto g = Grid::uniform(0.0, 15.0, 3001);
  const auto f1 = solve_fk_linear(1, 1, g);
  CHECK(f1.alpha == doctest::Approx(0.2));
  CHECK(std::abs(f1.profile.f.front()) < 1e-12);  // odd
  const auto f0 = solve_fk_linear(0, 1, g);
  CHECK(f0.residual_norm <= 1e-5);
  CHECK(f1.residual_norm <= 1e-5);
  CHECK(count_sign_changes(f0.profile, 1e-12) <= count_sign_changes(f1.profile, 1e-12));
}
