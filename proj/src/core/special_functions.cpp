#include "tfe10/core/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tfe10/errors.hpp"

namespace tfe10 {

double gamma(double x) {
  if (!(x > 0.0)) throw UnsupportedParameter("gamma is implemented for x > 0 only");
  return std::tgamma(x);
}

namespace {

enum class Order { minus_half, zero, half, one, three_halves };

Order classify(double order) {
  if (order == -0.5) return Order::minus_half;
  if (order == 0.0) return Order::zero;
  if (order == 0.5) return Order::half;
  if (order == 1.0) return Order::one;
  if (order == 1.5) return Order::three_halves;
  throw UnsupportedParameter("bessel_j: unsupported order " + std::to_string(order));
}

// Power series of x^{-nu} J_nu(x) for small x.
double scaled_series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
  double sum = term;
  for (int m = 1; m < 40; ++m) {
    term *= q / (m * (m + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_j(double order, double x) {
  const Order o = classify(order);
  if (!(x >= 0.0)) throw UnsupportedParameter("bessel_j requires x >= 0");
  const double pi = std::numbers::pi;
  switch (o) {
    case Order::minus_half:
      if (x == 0.0) throw EvaluationError("J_{-1/2} is singular at x = 0");
      return std::sqrt(2.0 / (pi * x)) * std::cos(x);
    case Order::half:
      if (x == 0.0) return 0.0;
      return std::sqrt(2.0 / (pi * x)) * std::sin(x);
    case Order::three_halves:
      if (x < 1e-3) return scaled_series(1.5, x) * std::pow(x, 1.5);
      return std::sqrt(2.0 / (pi * x)) * (std::sin(x) / x - std::cos(x));
    case Order::zero:
      return std::cyl_bessel_j(0.0, x);
    case Order::one:
      return std::cyl_bessel_j(1.0, x);
  }
  return 0.0;
}

double bessel_j_scaled(double order, double k, double r) {
  classify(order);
  const double x = k * r;
  if (order == -0.5) {
    // r^{1/2} J_{-1/2}(kr) = sqrt(2/(pi k)) cos(kr)
    return std::sqrt(2.0 / (std::numbers::pi * k)) * std::cos(x);
  }
  if (x < 1.0) return std::pow(k, order) * scaled_series(order, x);
  return bessel_j(order, x) / std::pow(r, order);
}

}  // namespace tfe10
