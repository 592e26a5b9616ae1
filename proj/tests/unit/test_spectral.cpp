#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfe10/core.hpp"
#include "tfe10/spectral.hpp"

using namespace tfe10;

namespace {

// F on a symmetric composite Gauss grid, for moment and semigroup checks.
RadialProfile kernel_on_line(double L, std::size_t panels) {
  const auto g = Grid::from_rule(QuadratureRule::uniform(-L, L, panels));
  const spectral::Kernel K(1, Grid::from_rule(QuadratureRule::uniform(0.0, L, panels / 2)));
  RadialProfile u;
  u.y.assign(g.points().begin(), g.points().end());
  u.weights.assign(g.weights().begin(), g.weights().end());
  // The half grid holds the nonnegative nodes in the same order.
  const auto F = K.values();
  const std::size_t half = F.size();
  u.f.resize(u.y.size());
  for (std::size_t i = 0; i < half; ++i) {
    u.f[half + i] = F[i];
    u.f[half - 1 - i] = F[i];
  }
  return u;
}

}  // namespace

TEST_CASE("kernel value at the origin and symmetry") {
  double d[11];
  spectral::kernel_derivatives_1d(0.0, d);
  CHECK(d[0] == doctest::Approx(std::tgamma(1.1) / std::numbers::pi).epsilon(1e-12));
  CHECK(d[0] == doctest::Approx(0.30282).epsilon(1e-5));
  CHECK(std::abs(d[1]) < 1e-14);
  CHECK(spectral::kernel_derivative_1d(0, 1.3) == doctest::Approx(spectral::kernel_derivative_1d(0, -1.3)));
}

TEST_CASE("kernel mass in two dimensions and positivity at the origin in three") {
  CHECK(std::abs(spectral::kernel_mass(2) - 1.0) < 1e-6);
  CHECK(spectral::radial_kernel_values(3, 0.0).F > 0.0);
}

TEST_CASE("linear eigenvalues") {
  CHECK(spectral::eigenvalue_linear(2) == doctest::Approx(-0.2));
  CHECK(spectral::eigenvalue_linear(7) == doctest::Approx(-0.7));
}

TEST_CASE("higher eigenfunctions have zero mass") {
  const spectral::Kernel K(1, Grid::from_rule(QuadratureRule::uniform(0.0, 200.0, 200)));
  const auto w = K.grid().weights();
  for (int k = 1; k <= 6; ++k) {
    const auto psi = spectral::eigenfunction(MultiIndex::scalar(k), K);
    double half = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) half += w[i] * psi.f[i];
    // Odd eigenfunctions are odd in y, so only even k need the half-line integral.
    if (k % 2 == 0) CHECK(std::abs(half) < 1e-10);
  }
}

TEST_CASE("adjoint polynomials") {
  const auto p3 = spectral::adjoint_polynomial(MultiIndex::scalar(3), 1);
  CHECK(p3(2.0) == doctest::Approx(8.0 / std::sqrt(6.0)));
  const double f10 = std::tgamma(11.0);
  const auto p10 = spectral::adjoint_polynomial(MultiIndex::scalar(10), 1);
  CHECK(p10(0.0) == doctest::Approx(-f10 / std::sqrt(f10)));
  CHECK(p10(1.5) == doctest::Approx((std::pow(1.5, 10) - f10) / std::sqrt(f10)));
}

TEST_CASE("tail envelope oscillates and decays at the predicted rate") {
  CHECK(spectral::decay_constant_formula() == doctest::Approx(0.12100).epsilon(1e-4));
  const auto K = spectral::kernel_1d(Grid::uniform(0.0, 15.0, 3001));
  const auto d = K.derivative(1);
  // The maximum at the origin plus the interior turning points.
  std::size_t extrema = 1;
  for (std::size_t i = 2; i < d.size(); ++i) extrema += (d[i - 1] < 0.0) != (d[i] < 0.0);
  CHECK(extrema >= 5);
  CHECK(spectral::envelope_extrema(K.grid().points(), K.values()).size() == extrema - 1);
}

TEST_CASE("moments, semigroup property and truncated expansions") {
  const auto u = kernel_on_line(150.0, 300);
  const auto m = spectral::moments(u, 1);
  CHECK(m.at(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(m.at(1)) < 1e-10);

  // Evolving F by t = 1 gives the kernel at time 2.
  const double x[] = {0.0, 0.5, 1.0, 2.0};
  const auto v = spectral::evolve_linear(u, 1.0, x);
  const double s = std::pow(2.0, -0.1);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(v.f[i] == doctest::Approx(s * spectral::kernel_derivative_1d(0, x[i] * s)).epsilon(1e-7));

  // Mass is conserved, so the rescaled solution of F is F itself.
  const double y[] = {0.0, 1.0, 3.0};
  const auto w = spectral::rescaled_solution(u, 2.0, y);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(w[i] - spectral::kernel_derivative_1d(0, y[i])) < 1e-7);
}

TEST_CASE("truncated expansion error shrinks with more terms") {
  const auto g = Grid::from_rule(QuadratureRule::uniform(-20.0, 20.0, 80));
  RadialProfile u;
  u.y.assign(g.points().begin(), g.points().end());
  u.weights.assign(g.weights().begin(), g.weights().end());
  for (double y : u.y) u.f.push_back(std::exp(-0.5 * (y - 1.0) * (y - 1.0)) / std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> y;
  for (double v = -15.0; v <= 15.0; v += 0.1) y.push_back(v);
  const double tau = 1.0;
  const auto exact = spectral::rescaled_solution(u, tau, y);
  // Discrete L2 on the uniform sample grid.
  auto error = [&](int terms) {
    const auto t = spectral::truncated_expansion(u, terms, tau, y);
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) e += 0.1 * (t[i] - exact[i]) * (t[i] - exact[i]);
    return std::sqrt(e);
  };
  // The psi_k are not L2-orthogonal: until the k = 10 mode enters, adding
  // k = 6..9 moves the partial sum away (6 -> 10 rises by about 20%).
  const double e1 = error(1), e3 = error(3), e6 = error(6), e10 = error(10), e16 = error(16);
  CHECK(e3 < e1);
  CHECK(e6 < e3);
  CHECK(e16 < e10);
  CHECK(e16 < e6);
  // Parseval values of the exact series remainder.
  CHECK(e6 == doctest::Approx(2.2563e-2).epsilon(0.05));
  CHECK(e10 == doctest::Approx(2.6902e-2).epsilon(0.05));
}
