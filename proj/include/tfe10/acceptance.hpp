#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

/// The numbered acceptance checks shared by `tfe10 verify` and the acceptance binary.
namespace tfe10::acceptance {

inline constexpr int criterion_count = 11;

struct Check {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured quantities, or the exception text when the computation threw.
  std::string detail;
  double seconds = 0.0;
};

/// Runs one criterion (1..11). Numerical exceptions become failed checks.
Check run_criterion(int id);

/// Runs the given criteria in order (all when empty), writing one line per
/// finished check to `progress` when non-null.
std::vector<Check> run(std::span<const int> ids = {}, std::ostream* progress = nullptr);

/// `[PASS] 3 biorthogonality: ...` lines; timings make the output nondeterministic.
std::string format_line(const Check& c, bool timing = false);
std::string format_table(const std::vector<Check>& checks, bool timing = false);

}  // namespace tfe10::acceptance
