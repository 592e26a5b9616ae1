#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfe10/errors.hpp"
#include "tfe10/odeshoot.hpp"

using namespace tfe10;
using namespace tfe10::odeshoot;

TEST_CASE("integrator on linear test problems") {
  const double one[] = {1.0};
  auto r = integrate([](double, std::span<const double> u, std::span<double> du) { du[0] = u[0]; }, 0.0, one, 1.0);
  REQUIRE(r.reached_end());
  CHECK(std::abs(r.final_state()[0] - std::numbers::e) < 1e-9);

  const double cs[] = {1.0, 0.0};
  auto osc = [](double, std::span<const double> u, std::span<double> du) {
    du[0] = u[1];
    du[1] = -u[0];
  };
  r = integrate(osc, 0.0, cs, std::numbers::pi);
  CHECK(r.final_state()[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r.interpolate(std::numbers::pi / 2)[0] == doctest::Approx(0.0).epsilon(1e-7));

  const double zero[] = {0.0, 0.0};
  r = integrate(osc, 0.0, zero, 5.0);
  CHECK(r.final_state()[0] == 0.0);
  CHECK(r.final_state()[1] == 0.0);
}

TEST_CASE("blow-up is reported, not thrown") {
  const double one[] = {1.0};
  const auto r = integrate([](double, std::span<const double> u, std::span<double> du) { du[0] = u[0] * u[0]; },
                           0.0, one, 2.0);
  CHECK(r.termination == Termination::blow_up);
}

namespace {

// f'' = f - 1, f(0) = f(1) = 0; unknown f'(0).
ShootingSpec linear_bvp() {
  ShootingSpec s;
  s.system_dimension = 2;
  s.model = "f'' = f - 1";
  s.rhs = [](double, std::span<const double> u, std::span<double> du) {
    du[0] = u[1];
    du[1] = u[0] - 1.0;
  };
  s.origin_state = {0.0, 0.0};
  s.unknown_indices = {1};
  s.y_end = 1.0;
  s.target_indices = {0};
  s.target_values = {0.0};
  return s;
}

}  // namespace

TEST_CASE("shooting recovers the slope of a linear boundary value problem") {
  const auto r = shoot(linear_bvp(), {0.0});
  REQUIRE(r.converged);
  CHECK(r.unknowns[0] == doctest::Approx(std::tanh(0.5)).epsilon(1e-9));
  CHECK(r.residual_norm < 1e-9);
}

TEST_CASE("inconsistent shooting specs are rejected") {
  auto s = linear_bvp();
  s.target_indices = {0, 1};
  s.target_values = {0.0, 0.0};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  CHECK_THROWS_AS(shoot(linear_bvp(), {0.0, 1.0}), InvalidArgument);
}

TEST_CASE("regularized mobility") {
  CHECK(regularized_mobility(1.0, 2.0, 0.1) == doctest::Approx(1.01));
  CHECK(regularized_mobility(1.0, 1.0, 1e-3) == doctest::Approx(std::sqrt(1.0 + 1e-6)));
  CHECK(regularized_mobility(0.0, 1.0, 1e-3) == doctest::Approx(1e-3));
  CHECK(regularized_mobility(0.3, 0.0, 1e-3) == 1.0);
}
