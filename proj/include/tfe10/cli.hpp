#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

/// Command-line surface: configuration, subcommand dispatch and output files.
namespace tfe10::cli {

enum class Format { csv, json };

inline const std::vector<std::string> subcommands = {"kernel",    "eigen",    "shoot",  "branch",
                                                     "lyapunov", "unstable", "evolve", "verify"};

struct RunConfig {
  std::string subcommand;
  double n = 1.0;
  /// Nonlinearity exponent of the unstable model; p0(n) when empty.
  std::optional<double> p;
  int N = 1;
  int k = 0;
  double y_max = 15.0;
  long long points = 4096;
  double ivp_tol = 1e-11;
  double shoot_tol = 1e-8;
  std::optional<double> delta;
  std::string out;  ///< standard output when empty
  Format format = Format::csv;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
  /// Sorted `key=value` lines; hashed into the provenance header.
  std::string canonical() const;
};

/// Applies `key = value` lines (`#` starts a comment) on top of `base`.
/// Unknown keys and malformed values throw ConfigError naming the key and line.
RunConfig parse_config(std::string_view text, RunConfig base = {});
/// parse_config on the file contents, then validate().
RunConfig load_config(const std::string& path);

/// Sets one key from its textual value; `where` prefixes error messages.
void set_value(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);

/// Runs a validated configuration. Returns 0 on success and 1 on numerical
/// failure (with a JSON diagnostic written to `err`).
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: parses argv, merges --config, runs. Usage errors return 2.
int main(int argc, char** argv);

}  // namespace tfe10::cli
