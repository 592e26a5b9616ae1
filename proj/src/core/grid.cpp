#include "tfe10/core/grid.hpp"

#include <cmath>

#include "tfe10/core/quadrature.hpp"
#include "tfe10/errors.hpp"

namespace tfe10 {

Grid::Grid(std::vector<double> points, std::vector<double> weights, Spacing spacing)
    : points_(std::move(points)), weights_(std::move(weights)), spacing_(spacing) {
  if (points_.empty()) throw InvalidArgument("grid must be nonempty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw InvalidArgument("grid point is not finite");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw InvalidArgument("grid points must be strictly increasing");
  }
}

Grid Grid::uniform(double a, double b, std::size_t count) {
  if (count < 2 || !(b > a)) throw InvalidArgument("uniform grid needs b > a and >= 2 points");
  std::vector<double> pts(count);
  std::vector<double> w(count);
  const double h = (b - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    pts[i] = a + h * static_cast<double>(i);
    w[i] = h;
  }
  pts.back() = b;
  w.front() = w.back() = 0.5 * h;
  return Grid(std::move(pts), std::move(w), Spacing::uniform);
}

Grid Grid::from_rule(const QuadratureRule& rule) {
  return Grid(rule.nodes(), rule.weights(), Spacing::panel_composite);
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace tfe10
