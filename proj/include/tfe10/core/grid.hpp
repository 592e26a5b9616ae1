#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tfe10 {

class QuadratureRule;

/// Ordered sample points of the similarity variable.
///
/// A panel-composite grid is built from a quadrature rule and carries the
/// matching weights, so sums over grid samples are integrals. Uniform grids
/// carry composite trapezoid weights.
class Grid {
 public:
  enum class Spacing { uniform, panel_composite };

  static Grid uniform(double a, double b, std::size_t count);
  static Grid from_rule(const QuadratureRule& rule);

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  Spacing spacing() const { return spacing_; }
  std::size_t size() const { return points_.size(); }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  Grid(std::vector<double> points, std::vector<double> weights, Spacing spacing);

  std::vector<double> points_;
  std::vector<double> weights_;
  Spacing spacing_;
};

/// Sum with pairwise reduction; order of operations depends only on the length.
double pairwise_sum(std::span<const double> values);

}  // namespace tfe10
