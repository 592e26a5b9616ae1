#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <nlohmann/json.hpp>
#include <sstream>

#include "tfe10/acceptance.hpp"
#include "tfe10/branching.hpp"
#include "tfe10/cli.hpp"
#include "tfe10/continuation.hpp"
#include "tfe10/core/quadrature.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/io.hpp"
#include "tfe10/similarity.hpp"
#include "tfe10/spectral.hpp"
#include "tfe10/unstable.hpp"

namespace tfe10::cli {

namespace {

using nlohmann::json;

/// Raised for a computation that finished but did not converge or failed a check.
struct NumericalFailure {
  json diagnostic;
};

const char* profile_header =
    "y,f,df,lap_f,d_lap_f,lap2_f,d_lap2_f,lap3_f,d_lap3_f,lap4_f,d_lap4_f";

std::string with_header(const RunConfig& cfg, const std::string& body) {
  return io::provenance_header(cfg.subcommand, cfg.canonical()) + body;
}

json with_provenance(const RunConfig& cfg, json j) {
  j["provenance"] = io::provenance_header(cfg.subcommand, cfg.canonical());
  return j;
}

// Numbers and booleans of a JSON object as `quantity,value` rows.
void flatten(const json& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_boolean()) {
    out += prefix + "," + (j.get<bool>() ? "1" : "0") + "\n";
  } else if (j.is_number()) {
    out += prefix + "," + io::format_double(j.get<double>()) + "\n";
  }
}

class Writer {
 public:
  Writer(const RunConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void main(const std::string& content) const {
    if (cfg_.out.empty()) out_ << content;
    else io::write_file(cfg_.out, content);
  }

  /// JSON object, or the flattened `quantity,value` table for --format csv.
  void record(const json& j) const {
    if (cfg_.format == Format::json) main(with_provenance(cfg_, j).dump(2) + "\n");
    else {
      std::string body = "quantity,value\n";
      flatten(j, "", body);
      main(with_header(cfg_, body));
    }
  }

  /// Profile CSV plus a sidecar JSON record next to it; one JSON document for --format json.
  void profile(const RadialProfile& p, const json& rec) const {
    if (cfg_.format == Format::json) {
      json j = rec;
      j["y"] = p.y;
      j["f"] = p.f;
      main(with_provenance(cfg_, j).dump() + "\n");
      return;
    }
    main(with_header(cfg_, io::profile_csv(p, profile_header)));
    if (!cfg_.out.empty()) {
      std::string side = cfg_.out;
      const auto dot = side.find_last_of('.');
      const auto slash = side.find_last_of('/');
      if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) side.erase(dot);
      io::write_file(side + ".json", with_provenance(cfg_, rec).dump(2) + "\n");
      out_ << rec.dump() << "\n";
    }
  }

 private:
  const RunConfig& cfg_;
  std::ostream& out_;
};

similarity::F0Options f0_options(const RunConfig& cfg) {
  similarity::F0Options o;
  o.delta = cfg.delta;
  // atol stays two decades below rtol; the defaults are kept bit-exact.
  if (cfg.ivp_tol != o.shoot.integrator.rtol) {
    o.shoot.integrator.rtol = cfg.ivp_tol;
    o.shoot.integrator.atol = cfg.ivp_tol * 1e-2;
  }
  o.shoot.residual_tol = cfg.shoot_tol;
  o.profile_points = static_cast<std::size_t>(cfg.points) | 1u;
  return o;
}

void require_n_positive(const RunConfig& cfg) {
  if (!(cfg.n > 0.0)) throw ConfigError(cfg.subcommand + " needs n > 0");
}

int kernel(const RunConfig& cfg, const Writer& w) {
  const auto grid = Grid::uniform(0.0, cfg.y_max, static_cast<std::size_t>(cfg.points));
  const auto K = spectral::kernel_radial(cfg.N, grid);
  const double mass = spectral::kernel_mass(cfg.N);
  const double mass_error = std::abs(mass - 1.0);
  const bool ok = mass_error <= 1e-8;
  double residual = -1.0;
  try {
    residual = spectral::kernel_equation_residual(K, 0.0, std::min(cfg.y_max, 15.0));
  } catch (const InsufficientDomainError&) {
  }

  json rec{{"dimension", cfg.N},
           {"mass", mass},
           {"mass_error", mass_error},
           {"mass_check", ok},
           {"equation_residual", residual},
           {"decay_constant", K.decay_constant()},
           {"flagged_points", K.flagged_points().size()}};
  if (cfg.format == Format::json) {
    json j = rec;
    j["y"] = std::vector<double>(grid.points().begin(), grid.points().end());
    for (int d = 0; d <= 2; ++d) {
      const auto c = K.derivative(d);
      j[d == 0 ? "F" : d == 1 ? "dF" : "d2F"] = std::vector<double>(c.begin(), c.end());
    }
    w.main(with_provenance(cfg, j).dump() + "\n");
  } else {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < grid.size(); ++i)
      rows.push_back({grid[i], K.derivative(0)[i], K.derivative(1)[i], K.derivative(2)[i]});
    std::string body = io::table_csv({"y", "F", "dF", "d2F"}, rows);
    body += "# mass = " + io::format_double(mass) + ", |mass - 1| = " + io::format_double(mass_error) +
            ", check <= 1e-8: " + (ok ? "pass" : "fail") + "\n";
    w.main(with_header(cfg, body));
  }
  if (!ok) throw NumericalFailure{rec};
  return 0;
}

int eigen(const RunConfig& cfg, const Writer& w) {
  if (cfg.N != 1) throw ConfigError("eigen computes the n = 0 family in one dimension only (dim 1)");
  if (cfg.k > 9) throw ConfigError("eigen supports k in 0..9");
  const auto grid = Grid::uniform(0.0, cfg.y_max, static_cast<std::size_t>(cfg.points));
  const auto f = similarity::solve_fk_linear(cfg.k, 1, grid);
  json rec = json::parse(similarity::to_json(f));
  rec["eigenvalue"] = spectral::eigenvalue_linear(cfg.k);
  rec["sign_changes"] = similarity::count_sign_changes(f.profile, 1e-12);
  if (cfg.format == Format::json) {
    w.profile(f.profile, rec);
  } else {
    // Linear profiles carry F^(k+1), ..., F^(k+10); name them as derivatives.
    std::string header = "y,f";
    for (int j = 1; j <= 10; ++j) header += ",f" + std::to_string(j);
    std::string body = io::profile_csv(f.profile, header);
    body += "# eigenvalue = " + io::format_double(spectral::eigenvalue_linear(cfg.k)) +
            ", equation residual = " + io::format_double(f.interior_residual) + "\n";
    w.main(with_header(cfg, body));
  }
  if (!f.converged) throw NumericalFailure{rec};
  return 0;
}

int shoot(const RunConfig& cfg, const Writer& w) {
  require_n_positive(cfg);
  const auto f = similarity::solve_f0(cfg.n, cfg.N, f0_options(cfg));
  json rec = json::parse(similarity::to_json(f));
  rec["sign_changes"] = similarity::count_sign_changes(f.profile, 10.0 * f.delta);
  if (!f.converged) throw NumericalFailure{rec};
  w.profile(f.profile, rec);
  return 0;
}

int branch(const RunConfig& cfg, const Writer& w) {
  require_n_positive(cfg);
  continuation::StepPolicy policy;
  for (int i = 1; i <= 10 && i / 10.0 <= cfg.n; ++i) policy.checkpoints.push_back(i / 10.0);
  auto o = f0_options(cfg);
  const double n_start = std::min(1e-3, cfg.n);
  const auto b = continuation::trace_branch(n_start, cfg.n, cfg.N, policy, o);
  if (cfg.format == Format::json) w.main(with_provenance(cfg, json::parse(continuation::branch_json(b))).dump(2) + "\n");
  else w.main(with_header(cfg, continuation::branch_csv(b)));
  if (b.termination != continuation::BranchTermination::reached_n_max)
    throw NumericalFailure{{{"termination", continuation::to_string(b.termination)},
                            {"points", b.points.size()},
                            {"last_n", b.points.empty() ? 0.0 : b.points.back().n},
                            {"diagnostics", b.diagnostics}}};
  return 0;
}

int lyapunov(const RunConfig& cfg, const Writer& w) {
  json rec;
  if (cfg.k == 0) {
    rec = json::parse(branching::to_json(branching::mu10(cfg.N)));
  } else {
    if (cfg.N != 2) throw ConfigError("lyapunov with k = 1 or 2 is the two-dimensional system (dim 2)");
    const branching::RadialTable table(branching::branching_kernel(2));
    if (cfg.k == 1) {
      const auto coeffs = branching::dipole_coefficients(table);
      const auto rep = branching::dipole_solve(table, coeffs);
      rec["dipole"] = json::parse(branching::to_json(rep));
      rec["quadratic"] = json::parse(branching::to_json(branching::assemble_quadratic_coefficients(table, 0)));
      bool all = true;
      for (const auto& s : rep.solutions) all = all && s.converged;
      if (!all) throw NumericalFailure{rec};
    } else if (cfg.k == 2) {
      rec = json::parse(branching::to_json(branching::assemble_second_level(table, 0)));
    } else {
      throw ConfigError("lyapunov supports k = 0, 1, 2");
    }
  }
  w.record(rec);
  return 0;
}

int unstable_run(const RunConfig& cfg, const Writer& w) {
  const double p0 = unstable::p_critical(cfg.n, cfg.N);
  const double p = cfg.p.value_or(p0);
  const auto ex = unstable::exponents_unstable(cfg.n, p, cfg.N);
  json ex_json = json::parse(unstable::to_json(ex));
  if (std::abs(p - p0) > 1e-12 * p0 || !(cfg.n > 0.0)) {
    // Away from p0 (or at n = 0) only the exponent algebra applies.
    w.record(ex_json);
    return 0;
  }
  unstable::UnstableOptions o;
  o.f0 = f0_options(cfg);
  const auto r = unstable::solve_f0_unstable(cfg.n, cfg.N, p, o);
  json rec = json::parse(unstable::to_json(r));
  if (!r.profile.converged) throw NumericalFailure{rec};
  w.profile(r.profile.profile, rec);
  return 0;
}

int evolve(const RunConfig& cfg, const Writer& w) {
  if (cfg.N != 1) throw ConfigError("evolve runs the one-dimensional semigroup (dim 1)");
  if (cfg.k > 1) throw ConfigError("evolve takes k = 0 (bump N(1,1)) or k = 1 (centred bump N(0,1))");
  const double mean = cfg.k == 0 ? 1.0 : 0.0;
  const std::size_t panels = std::max<std::size_t>(4, static_cast<std::size_t>(cfg.points) / QuadratureRule::default_nodes);
  const auto g = Grid::from_rule(QuadratureRule::uniform(-cfg.y_max, cfg.y_max, panels));
  RadialProfile u;
  u.y.assign(g.points().begin(), g.points().end());
  u.weights.assign(g.weights().begin(), g.weights().end());
  for (double y : u.y) u.f.push_back(std::exp(-0.5 * (y - mean) * (y - mean)) / std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> tau;
  for (double t = 30.0; t <= 90.0; t += 5.0) tau.push_back(t);
  const auto c = spectral::rescaled_convergence(u, tau);
  const double expected = (cfg.k + 1) / 10.0;
  json rec{{"datum_mean", mean}, {"tau", c.tau}, {"error", c.error}, {"rate", c.rate},
           {"expected_rate", expected}, {"short_range", c.short_range}};
  if (cfg.format == Format::json) {
    w.main(with_provenance(cfg, rec).dump(2) + "\n");
  } else {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < c.tau.size(); ++i) rows.push_back({c.tau[i], c.error[i]});
    std::string body = io::table_csv({"tau", "error"}, rows);
    body += "# rate = " + io::format_double(c.rate) + ", expected " + io::format_double(expected) + "\n";
    w.main(with_header(cfg, body));
  }
  return 0;
}

int verify(const RunConfig& cfg, const Writer& w, std::ostream& err) {
  std::vector<int> ids;
  if (cfg.k >= 1 && cfg.k <= acceptance::criterion_count) ids.push_back(cfg.k);
  else if (cfg.k != 0) throw ConfigError("verify takes k = 0 (all) or a criterion number 1..11");
  const auto checks = acceptance::run(ids, &err);
  bool all = true;
  json failed = json::array();
  for (const auto& c : checks)
    if (!c.passed) {
      all = false;
      failed.push_back({{"criterion", c.id}, {"name", c.name}, {"detail", c.detail}});
    }
  w.main(acceptance::format_table(checks));
  if (!all) throw NumericalFailure{{{"failed_criteria", failed}}};
  return 0;
}

const char* usage_text =
    "usage: tfe10 <kernel|eigen|shoot|branch|lyapunov|unstable|evolve|verify> [options]\n"
    "  --n --p --dim --k --ymax --points --tol --shoot-tol --delta --out --format --config\n";

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Writer w(cfg, out);
  try {
    if (cfg.subcommand == "kernel") return kernel(cfg, w);
    if (cfg.subcommand == "eigen") return eigen(cfg, w);
    if (cfg.subcommand == "shoot") return shoot(cfg, w);
    if (cfg.subcommand == "branch") return branch(cfg, w);
    if (cfg.subcommand == "lyapunov") return lyapunov(cfg, w);
    if (cfg.subcommand == "unstable") return unstable_run(cfg, w);
    if (cfg.subcommand == "evolve") return evolve(cfg, w);
    if (cfg.subcommand == "verify") return verify(cfg, w, err);
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const NumericalFailure& f) {
    json d = f.diagnostic;
    d["subcommand"] = cfg.subcommand;
    d["status"] = "not converged";
    err << d.dump() << "\n";
    return 1;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    err << json{{"subcommand", cfg.subcommand}, {"status", "error"}, {"error", e.what()}}.dump() << "\n";
    return 1;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Self-similar solutions of the tenth-order thin film equation", "tfe10"};
  std::string sub;
  app.add_option("subcommand", sub, "kernel | eigen | shoot | branch | lyapunov | unstable | evolve | verify")
      ->required()
      ->check(CLI::IsMember(subcommands));
  std::map<std::string, std::string> given;
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--n", "n"},         {"--p", "p"},           {"--dim", "dim"},         {"--k", "k"},
      {"--ymax", "ymax"},   {"--points", "points"}, {"--tol", "tol"},         {"--shoot-tol", "shoot_tol"},
      {"--delta", "delta"}, {"--out", "out"},       {"--format", "format"}};
  for (const auto& [flag, key] : flags) app.add_option(flag, given[key]);
  std::string config_path;
  app.add_option("--config", config_path, "file of key = value lines; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << usage_text;
    return 2;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : parse_config(
        [&] {
          std::ifstream f(config_path);
          if (!f) throw ConfigError("cannot read config file " + config_path);
          std::stringstream b;
          b << f.rdbuf();
          return b.str();
        }());
    for (const auto& [flag, key] : flags)
      if (app.count(flag)) set_value(cfg, key, given[key], flag);
    cfg.subcommand = sub;
    cfg.validate();
    return execute(cfg, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n" << usage_text;
    return 2;
  }
}

}  // namespace tfe10::cli
