#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tfe10 {

/// Multi-index beta in N^N labelling eigenpairs.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);
  /// One-dimensional index k.
  static MultiIndex scalar(int k) { return MultiIndex({k}); }

  const std::vector<int>& components() const { return components_; }
  std::size_t dimension() const { return components_.size(); }
  int order() const;          ///< |beta|
  double factorial() const;   ///< beta! = prod beta_i!
  double weight() const;      ///< sqrt(beta!)
  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> components_;
};

/// Sampled radial (or one-dimensional) profile f(y).
///
/// `derivatives[j]` holds f^{(j+1)} when available. For N >= 2 the profile is
/// a function of r = |y| multiplied by the angular factor named in
/// `angular_mode` (0: none, 1: cos(theta), 2: sin(theta)).
struct RadialProfile {
  int dimension = 1;
  std::vector<double> y;
  std::vector<double> f;
  std::vector<std::vector<double>> derivatives;
  std::optional<double> interface;  ///< support edge y0, empty for unbounded support
  int angular_mode = 0;
  /// Quadrature weights matching y (empty when the samples carry none).
  std::vector<double> weights;

  std::size_t size() const { return y.size(); }
};

}  // namespace tfe10
