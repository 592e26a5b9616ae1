#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tfe10 {

/// Composite Gauss-Legendre rule: a fixed reference rule mapped onto each panel.
class QuadratureRule {
 public:
  static constexpr int default_nodes = 16;

  /// Panels given by consecutive break points.
  explicit QuadratureRule(std::vector<double> breaks, int nodes_per_panel = default_nodes);

  static QuadratureRule uniform(double a, double b, std::size_t panels,
                                int nodes_per_panel = default_nodes);

  /// Panels shrink geometrically (ratio 2) toward every listed point inside
  /// [a, b]; `levels` halvings per side. Base panels have width <= max_width.
  static QuadratureRule graded(double a, double b, std::span<const double> singular_points,
                               int levels = 40, double max_width = 1.0,
                               int nodes_per_panel = default_nodes);

  std::span<const double> breaks() const { return breaks_; }
  int nodes_per_panel() const { return nodes_per_panel_; }
  std::size_t panel_count() const { return breaks_.size() - 1; }
  /// Polynomial degree integrated exactly on each panel.
  int exact_degree() const { return 2 * nodes_per_panel_ - 1; }
  double lower() const { return breaks_.front(); }
  double upper() const { return breaks_.back(); }

  /// Every panel split in two.
  QuadratureRule refined() const;

  /// Flattened nodes and weights over all panels.
  std::vector<double> nodes() const;
  std::vector<double> weights() const;

 private:
  std::vector<double> breaks_;
  int nodes_per_panel_;
};

/// Reference Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

struct QuadratureResult {
  double value = 0.0;
  /// |I(rule) - I(rule.refined())|
  double error_estimate = 0.0;
};

/// Integrates f with the rule and estimates the error by panel halving.
/// Throws EvaluationError naming the node if f returns a non-finite value.
QuadratureResult quadrature(const std::function<double(double)>& f, const QuadratureRule& rule);

QuadratureResult quadrature(const std::function<double(double)>& f, double a, double b,
                            std::size_t panels = 8,
                            int nodes_per_panel = QuadratureRule::default_nodes);

/// Single pass without the refinement estimate.
double integrate(const std::function<double(double)>& f, const QuadratureRule& rule);

}  // namespace tfe10
