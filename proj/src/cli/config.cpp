#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tfe10/cli.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/io.hpp"

namespace tfe10::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> a = {
      {"N", "dim"},        {"dimension", "dim"}, {"y_max", "ymax"},        {"ivp_tol", "tol"},
      {"shoot-tol", "shoot_tol"}, {"output", "out"}, {"subcommand", "subcommand"}};
  return a;
}

double to_double(const std::string& key, const std::string& v, const std::string& where) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(where + ": " + key + " expects a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v, const std::string& where) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(where + ": " + key + " expects an integer, got '" + v + "'");
  return x;
}

}  // namespace

void set_value(RunConfig& cfg, const std::string& raw_key, const std::string& value, const std::string& where) {
  std::string key = raw_key;
  if (auto it = aliases().find(key); it != aliases().end()) key = it->second;

  if (key == "n") cfg.n = to_double(key, value, where);
  else if (key == "p") cfg.p = to_double(key, value, where);
  else if (key == "dim") {
    const auto v = to_integer(key, value, where);
    if (v < 1 || v > 3) throw ConfigError(where + ": dim must be 1, 2 or 3");
    cfg.N = static_cast<int>(v);
  } else if (key == "k") {
    const auto v = to_integer(key, value, where);
    if (v < 0 || v > 64) throw ConfigError(where + ": k out of range");
    cfg.k = static_cast<int>(v);
  } else if (key == "ymax") cfg.y_max = to_double(key, value, where);
  else if (key == "points") cfg.points = to_integer(key, value, where);
  else if (key == "tol") cfg.ivp_tol = to_double(key, value, where);
  else if (key == "shoot_tol") cfg.shoot_tol = to_double(key, value, where);
  else if (key == "delta") cfg.delta = to_double(key, value, where);
  else if (key == "out") cfg.out = value;
  else if (key == "format") {
    if (value == "csv") cfg.format = Format::csv;
    else if (value == "json") cfg.format = Format::json;
    else throw ConfigError(where + ": format expects csv or json, got '" + value + "'");
  } else if (key == "subcommand") {
    if (std::find(subcommands.begin(), subcommands.end(), value) == subcommands.end())
      throw ConfigError(where + ": unknown subcommand '" + value + "'");
    cfg.subcommand = value;
  } else {
    throw ConfigError(where + ": unknown key '" + raw_key + "'");
  }
}

void RunConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!std::isfinite(n) || n < 0.0) throw ConfigError("n must be finite and >= 0");
  if (p && !std::isfinite(*p)) throw ConfigError("p must be finite");
  if (!positive(y_max)) throw ConfigError("ymax must be > 0");
  if (points < 64) throw ConfigError("points must be >= 64");
  if (!positive(ivp_tol)) throw ConfigError("tol must be > 0");
  if (!positive(shoot_tol)) throw ConfigError("shoot_tol must be > 0");
  if (delta && !positive(*delta)) throw ConfigError("delta must be > 0");
}

std::string RunConfig::canonical() const {
  std::ostringstream s;
  s << "delta=" << (delta ? io::format_double(*delta) : "default") << "\n"
    << "dim=" << N << "\n"
    << "format=" << (format == Format::csv ? "csv" : "json") << "\n"
    << "k=" << k << "\n"
    << "n=" << io::format_double(n) << "\n"
    << "p=" << (p ? io::format_double(*p) : "p0") << "\n"
    << "points=" << points << "\n"
    << "shoot_tol=" << io::format_double(shoot_tol) << "\n"
    << "subcommand=" << subcommand << "\n"
    << "tol=" << io::format_double(ivp_tol) << "\n"
    << "ymax=" << io::format_double(y_max) << "\n";
  return s.str();
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::string where = "line " + std::to_string(number);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    if (value.empty()) throw ConfigError(where + ": " + key + " has no value");
    set_value(base, key, value, where);
  }
  return base;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  cfg.validate();
  return cfg;
}

}  // namespace tfe10::cli
