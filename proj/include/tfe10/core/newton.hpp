#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tfe10 {

using ResidualFunction = std::function<std::vector<double>(std::span<const double>)>;

/// Returns the Jacobian as row-major m x m values.
using JacobianFunction = std::function<std::vector<double>(std::span<const double>)>;

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// Damping factor is halved until the residual 2-norm decreases or this floor is hit.
  double min_damping = 1.0 / 1024.0;
  /// Optional analytic or mesh-frozen Jacobian; central differences otherwise.
  JacobianFunction jacobian;
  /// Evaluate finite-difference columns on separate threads.
  bool parallel_jacobian = false;
  /// Reciprocal condition estimate below which the Jacobian counts as singular.
  double singular_rcond = 1e-14;
};

struct NewtonReport {
  std::vector<double> x;
  std::vector<double> residual;
  double residual_norm = 0.0;  ///< max-norm of residual at x
  int iterations = 0;
  bool converged = false;
  std::vector<double> damping_history;
  std::string message;
};

/// Central-difference Jacobian with step sqrt(eps) * max(1, |x_i|).
std::vector<double> finite_difference_jacobian(const ResidualFunction& f, std::span<const double> x,
                                               bool parallel = false);

/// Damped Newton iteration. Hitting max_iter is reported, not thrown; a
/// numerically singular Jacobian throws DegenerateRootError. The returned x
/// is flagged converged only when ||F(x)||_inf <= tol.
NewtonReport solve_system(const ResidualFunction& f, std::vector<double> x0,
                          const NewtonOptions& options = {});

}  // namespace tfe10
