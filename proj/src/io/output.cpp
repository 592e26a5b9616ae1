#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfe10/errors.hpp"
#include "tfe10/io.hpp"

#ifndef TFE10_VERSION
#define TFE10_VERSION "dev"
#endif

namespace tfe10::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  out += '\n';
  return out;
}

std::string table_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& r : rows) {
    if (r.size() != columns.size()) throw InvalidArgument("table row width differs from the header");
    out += csv_row(r);
  }
  return out;
}

std::string profile_csv(const RadialProfile& p, const std::string& header) {
  std::size_t columns = 1;
  for (char c : header) columns += c == ',';
  const std::size_t have = 2 + p.derivatives.size();
  if (columns > have) throw InvalidArgument("profile has fewer columns than the header names");
  std::string out = header + "\n";
  std::vector<double> row(columns);
  for (std::size_t i = 0; i < p.y.size(); ++i) {
    row[0] = p.y[i];
    row[1] = p.f[i];
    for (std::size_t j = 2; j < columns; ++j) row[j] = p.derivatives[j - 2][i];
    out += csv_row(row);
  }
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string provenance_header(std::string_view subcommand, std::string_view canonical_config) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_config)));
  std::ostringstream s;
  s << "# tfe10 " << TFE10_VERSION << " | subcommand " << subcommand << " | config " << hash << "\n";
  return s.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error("write to " + path + " failed");
}

}  // namespace tfe10::io
