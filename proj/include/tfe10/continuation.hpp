#pragma once

#include <string>
#include <vector>

#include "tfe10/similarity.hpp"

/// Natural-parameter continuation of the first nonlinear eigenfunction in n.
namespace tfe10::continuation {

struct BranchPoint {
  double n = 0.0;
  double alpha0 = 0.0;  ///< N/(10+Nn), prescribed
  double y0 = 0.0;
  /// (Delta f(0), Delta^2 f(0), Delta^3 f(0), Delta^4 f(0), y0); in 1D the even derivatives.
  std::vector<double> unknowns;
  int iterations = 0;
  double residual = 0.0;
  double interior_residual = 0.0;
  int sign_changes = 0;
  double step = 0.0;  ///< Delta n that produced the point (0 for the seed)
};

enum class BranchTermination { reached_n_max, failed_corrector, step_underflow };
std::string to_string(BranchTermination t);

struct StepPolicy {
  double initial_step = 0.01;
  double max_step = 0.05;
  double growth = 1.3;
  /// Consecutive easy corrector solves before the step grows.
  int easy_successes = 2;
  /// A solve is easy when Newton needs at most this many iterations.
  int easy_iterations = 10;
  /// Three consecutive halvings below this step end the trace.
  double min_step = 1e-5;
  /// n values the trace lands on exactly (sorted).
  std::vector<double> checkpoints;
};

struct StepRecord {
  double n_from = 0.0;
  double step = 0.0;
  bool accepted = false;
  int iterations = 0;
  std::string note;
};

struct Branch {
  int dimension = 1;
  std::vector<BranchPoint> points;
  std::vector<StepRecord> history;
  BranchTermination termination = BranchTermination::reached_n_max;
  std::string diagnostics;
  similarity::F0Options options;
};

/// Seeds with the kernel-guided solve at n_start and continues to n_max.
Branch trace_branch(double n_start, double n_max, int N, const StepPolicy& policy = {},
                    const similarity::F0Options& options = {});

/// Profile of branch point i regenerated from its unknowns.
RadialProfile point_profile(const Branch& branch, std::size_t i, std::size_t samples = 4001);

/// Rechecks point i: boundary residual <= 1e-8, interior residual <= 1e-6,
/// exact alpha0. Returns an empty string on success, the reason otherwise.
std::string revalidate(const Branch& branch, std::size_t i);

struct BranchTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Columns n, alpha0, y0, f2_0, f4_0, f6_0, f8_0, iters, residual.
BranchTable branch_report(const Branch& branch);
std::string branch_csv(const Branch& branch);
std::string branch_json(const Branch& branch);

}  // namespace tfe10::continuation
