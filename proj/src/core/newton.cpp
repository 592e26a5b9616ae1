#include "tfe10/core/newton.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "tfe10/errors.hpp"

namespace tfe10 {

namespace {

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double sum_squares(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Residual evaluation that maps library failures (blow-up, non-finite) to an empty vector.
std::vector<double> try_residual(const ResidualFunction& f, std::span<const double> x) {
  try {
    auto r = f(x);
    if (!all_finite(r)) return {};
    return r;
  } catch (const Error&) {
    return {};
  }
}

}  // namespace

std::vector<double> finite_difference_jacobian(const ResidualFunction& f, std::span<const double> x,
                                               bool parallel) {
  const std::size_t n = x.size();
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  std::vector<std::vector<double>> columns(n);
  std::vector<std::string> failures(n);

  auto column = [&](std::size_t j) {
    std::vector<double> xp(x.begin(), x.end());
    std::vector<double> xm(x.begin(), x.end());
    const double h = root_eps * std::max(1.0, std::abs(x[j]));
    xp[j] += h;
    xm[j] -= h;
    // Actual step after rounding keeps the quotient consistent.
    const double step = xp[j] - xm[j];
    try {
      const auto fp = f(xp);
      const auto fm = f(xm);
      std::vector<double> col(fp.size());
      for (std::size_t i = 0; i < fp.size(); ++i) col[i] = (fp[i] - fm[i]) / step;
      columns[j] = std::move(col);
    } catch (const Error& e) {
      failures[j] = e.what();
    }
  };

  if (parallel && n > 1) {
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (std::size_t j = 0; j < n; ++j) workers.emplace_back(column, j);
    for (auto& w : workers) w.join();
  } else {
    for (std::size_t j = 0; j < n; ++j) column(j);
  }

  for (std::size_t j = 0; j < n; ++j)
    if (!failures[j].empty())
      throw EvaluationError("Jacobian column " + std::to_string(j) + ": " + failures[j]);

  const std::size_t m = columns.empty() ? 0 : columns.front().size();
  std::vector<double> jac(m * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) jac[i * n + j] = columns[j][i];
  return jac;
}

NewtonReport solve_system(const ResidualFunction& f, std::vector<double> x0,
                          const NewtonOptions& options) {
  NewtonReport report;
  report.x = std::move(x0);
  const std::size_t n = report.x.size();

  auto r = try_residual(f, report.x);
  if (r.empty()) {
    report.message = "residual not evaluable at initial guess";
    report.residual_norm = std::numeric_limits<double>::infinity();
    return report;
  }
  if (r.size() != n) throw InvalidArgument("solve_system needs a square system");
  report.residual = r;
  report.residual_norm = max_norm(r);

  for (int it = 0; it < options.max_iter; ++it) {
    if (report.residual_norm <= options.tol) break;
    report.iterations = it + 1;

    const auto jv = options.jacobian ? options.jacobian(report.x)
                                     : finite_difference_jacobian(f, report.x, options.parallel_jacobian);
    Eigen::MatrixXd jac(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) jac(i, j) = jv[i * n + j];
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs(i) = -report.residual[i];

    // Column scaling keeps the singularity test independent of unknown units.
    Eigen::VectorXd scale(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double c = jac.col(j).cwiseAbs().maxCoeff();
      scale(j) = c > 0.0 ? 1.0 / c : 1.0;
    }
    const Eigen::MatrixXd scaled = jac * scale.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(scaled);
    if (lu.rank() < static_cast<Eigen::Index>(n) || lu.rcond() < options.singular_rcond) {
      std::ostringstream msg;
      msg << "numerically singular Jacobian at iteration " << report.iterations
          << " (rcond = " << lu.rcond() << ")";
      throw DegenerateRootError(msg.str());
    }
    const Eigen::VectorXd dx = scale.asDiagonal() * lu.solve(rhs);

    // Backtracking on the 2-norm merit; the Newton direction descends it.
    const double merit = sum_squares(report.residual);
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= options.min_damping) {
      std::vector<double> trial(report.x);
      for (std::size_t i = 0; i < n; ++i) trial[i] += lambda * dx(i);
      auto rt = try_residual(f, trial);
      if (!rt.empty() && sum_squares(rt) < (1.0 - 1e-4 * lambda) * merit) {
        report.x = std::move(trial);
        report.residual = std::move(rt);
        report.residual_norm = max_norm(report.residual);
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    report.damping_history.push_back(accepted ? lambda : 0.0);
    if (!accepted) {
      report.message = "line search failed to reduce the residual";
      break;
    }
  }

  report.converged = report.residual_norm <= options.tol;
  if (report.converged) {
    report.message = "converged";
  } else if (report.message.empty()) {
    report.message = "iteration limit reached";
  }
  return report;
}

}  // namespace tfe10
