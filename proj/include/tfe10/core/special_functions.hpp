#pragma once

namespace tfe10 {

double gamma(double x);

/// Bessel function of the first kind for orders -1/2, 0, 1/2, 1, 3/2 and x >= 0.
/// Other orders throw UnsupportedParameter.
double bessel_j(double order, double x);

/// r^{-order} J_order(k r), finite as r -> 0.
double bessel_j_scaled(double order, double k, double r);

}  // namespace tfe10
