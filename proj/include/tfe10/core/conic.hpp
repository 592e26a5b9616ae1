#pragma once

#include <array>
#include <vector>

namespace tfe10 {

/// A x^2 + B y^2 + C x + D y + E x y + F0 = 0, with (x, y) playing the role
/// of the expansion coefficients (c2, c3).
struct Conic {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double E = 0.0;
  double F0 = 0.0;

  double operator()(double x, double y) const {
    return A * x * x + B * y * y + C * x + D * y + E * x * y + F0;
  }
  double dx(double x, double y) const { return 2.0 * A * x + C + E * y; }
  double dy(double x, double y) const { return 2.0 * B * y + D + E * x; }
  bool quadratic_part_vanishes(double tol = 0.0) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Resultant of the two conics with respect to y as polynomial coefficients
/// in x (lowest degree first, degree <= 4).
std::array<double, 5> conic_resultant(const Conic& c1, const Conic& c2);

/// Determinant of the 4x4 Sylvester matrix of two quadratics in y evaluated
/// at a fixed x (full-pivot elimination).
double sylvester_determinant(const Conic& c1, const Conic& c2, double x);

/// All real common points, each polished by Newton and checked to
/// |c1|, |c2| <= 1e-9. Throws InfiniteIntersectionError for proportional
/// conics and ResultantVanishesError when a common component exists.
std::vector<Point2> conic_intersections(const Conic& c1, const Conic& c2);

/// Real roots of a polynomial (coefficients lowest degree first).
std::vector<double> real_polynomial_roots(std::vector<double> coeffs);

}  // namespace tfe10
