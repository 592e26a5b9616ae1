#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfe10/types.hpp"

/// CSV/JSON formatting shared by the command-line tool and the bindings.
namespace tfe10::io {

/// Fixed 17 significant digits.
std::string format_double(double v);
std::string csv_row(std::span<const double> values);
std::string table_csv(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

/// Profile CSV: y, f and the derivative columns under the given header.
std::string profile_csv(const RadialProfile& profile, const std::string& header);

/// 64-bit FNV-1a, printed in hex in provenance headers.
std::uint64_t fnv1a(std::string_view text);
/// `# tfe10 <version> | subcommand <name> | config <hash>` line.
std::string provenance_header(std::string_view subcommand, std::string_view canonical_config);

/// Truncates and writes; throws Error on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace tfe10::io
