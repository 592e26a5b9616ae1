#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tfe10/errors.hpp"
#include "tfe10/io.hpp"
#include "tfe10/unstable.hpp"

namespace tfe10::unstable {

UnstableExponents exponents_unstable(double n, double p, int N) {
  if (!std::isfinite(n) || !std::isfinite(p)) throw InvalidArgument("exponents need finite n and p");
  if (N < 1) throw InvalidArgument("dimension must be >= 1");
  if (n < 0.0) throw InvalidArgument("exponents need n >= 0");
  const double denom = 5.0 * p - (n + 5.0);
  if (denom == 0.0) throw SingularExponentError("5p = n + 5: alpha is singular");
  if (!(p > n + 1.0)) throw InvalidArgument("exponents need p > n + 1");
  UnstableExponents e;
  e.n = n;
  e.p = p;
  e.dimension = N;
  e.alpha = 4.0 / denom;
  e.beta = (1.0 - n * e.alpha) / 10.0;
  e.p0 = p_critical(n, N);
  e.balance_mobility = e.alpha * n + 10.0 * e.beta - 1.0;
  e.balance_diffusion = e.alpha * (p - 1.0) + 2.0 * e.beta - 1.0;
  e.printed_mobility = 10.0 * e.beta - n * e.alpha - 1.0;
  e.printed_diffusion = 2.0 * e.beta - e.alpha * (p - 1.0) - 1.0;
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, n, p});
  e.identities_ok = std::abs(e.balance_mobility) <= eps && std::abs(e.balance_diffusion) <= eps;
  return e;
}

double p_critical(double n, int N) {
  if (N < 1) throw InvalidArgument("dimension must be >= 1");
  return n + 1.0 + 8.0 / N;
}

double unstable_symbol(double k) {
  const double k2 = k * k;
  const double k4 = k2 * k2;
  return k2 - k4 * k4 * k2;
}

SymbolBand unstable_band() {
  SymbolBand b;
  b.argmax = std::pow(0.2, 0.125);
  b.max_value = unstable_symbol(b.argmax);
  return b;
}

namespace {

similarity::NonlinearEigenfunction finish(double n, int N, const odeshoot::ShootingSpec& spec,
                                          const odeshoot::ShootResult& r, const similarity::F0Options& o) {
  similarity::NonlinearEigenfunction out;
  out.n = n;
  out.dimension = N;
  const auto ex = similarity::alpha0(n, N);
  out.alpha = ex.alpha;
  out.beta = ex.beta;
  out.normalization = o.normalization;
  out.delta = spec.params.delta;
  out.unknowns = r.unknowns;
  out.residuals = r.residuals;
  out.residual_norm = r.residual_norm;
  out.iterations = r.iterations;
  out.converged = r.converged;
  out.message = r.message;
  out.y0 = r.unknowns.back();
  out.profile = similarity::sample_profile(spec, r.unknowns, o.profile_points, o.shoot.integrator);
  const auto fine = similarity::sample_profile(spec, r.unknowns, o.check_points, o.shoot.integrator);
  out.interior_residual = similarity::f0_interior_residual(spec, fine);
  return out;
}

}  // namespace

UnstableProfile solve_f0_unstable(double n, int N, const UnstableOptions& options) {
  return solve_f0_unstable(n, N, p_critical(n, N), options);
}

UnstableProfile solve_f0_unstable(double n, int N, double p, const UnstableOptions& options) {
  if (!(n > 0.0)) throw InvalidArgument("solve_f0_unstable needs n > 0");
  const double p0 = p_critical(n, N);
  if (std::abs(p - p0) > 1e-12 * p0)
    throw UnsupportedParameter("the mass-conserving reduction holds at p = p0(n) = " + io::format_double(p0) +
                               " only");
  if (!(options.start_weight > 0.0 && options.start_weight < 1.0) || !(options.weight_growth > 1.0))
    throw InvalidArgument("homotopy needs 0 < start_weight < 1 and weight_growth > 1");

  UnstableProfile out;
  out.exponents = exponents_unstable(n, p, N);
  if (!(options.f0.normalization > 0.0)) throw InvalidArgument("unstable profile needs f(0) > 0");

  // The kappa homotopy runs at a coarser regularization; with delta = 1e-10 the
  // residual map bends on the delta scale and Newton cannot follow kappa at all.
  similarity::F0Options target = options.f0;
  const double delta_target = target.delta.value_or(similarity::default_delta(n));
  similarity::F0Options o = target;
  o.delta = std::max(delta_target, options.homotopy_delta);
  auto seed = similarity::solve_f0(n, N, o);
  o.shoot.frozen_mesh_passes = std::max(o.shoot.frozen_mesh_passes, 2);
  if (!seed.converged) {
    out.profile = seed;
    out.message = "thin film seed failed: " + seed.message;
    return out;
  }

  auto spec_at = [&](double kappa, double delta) {
    similarity::F0Options od = o;
    od.delta = delta;
    auto spec = similarity::f0_spec(n, N, od, odeshoot::RadialModel::unstable, p);
    spec.params.flux_coefficient = kappa;
    spec.rhs = odeshoot::radial_rhs(spec.params);
    return spec;
  };

  // Geometric continuation of one scalar from `from` to `to`; returns the last value reached.
  std::vector<double> x = seed.unknowns;
  std::optional<odeshoot::ShootResult> last;
  std::string why;
  auto continue_in = [&](double from, double to, double first, double growth, auto&& spec_for,
                         std::vector<double>* path, const char* name) {
    double at = from;
    while (at != to) {
      double next = at == from && from == 0.0 ? first : (to > at ? std::min(to, at * growth) : std::max(to, at / growth));
      if (std::abs(next - to) <= 1e-12 * std::abs(to)) next = to;
      std::optional<odeshoot::ShootResult> r;
      try {
        auto s = odeshoot::shoot(spec_for(next), x, o.shoot);
        if (s.converged) r = std::move(s);
        else why = s.message;
      } catch (const Error& e) {
        why = e.what();
      }
      if (!r) {
        growth = std::sqrt(growth);
        if ((at == 0.0) || growth < 1.0 + 1e-4) {
          std::ostringstream m;
          m << "homotopy in " << name << " stalled at " << at << ": " << why;
          out.message = m.str();
          return at;
        }
        continue;
      }
      at = next;
      x = r->unknowns;
      if (path) path->push_back(at);
      last = std::move(r);
      if (last->iterations <= 6) growth *= growth;
    }
    return at;
  };

  const double delta_h = *o.delta;
  const double kappa = continue_in(0.0, 1.0, options.start_weight, options.weight_growth,
                                   [&](double k) { return spec_at(k, delta_h); }, &out.path, "the flux coefficient");
  double delta = delta_h;
  if (kappa == 1.0 && delta_target < delta_h)
    delta = continue_in(delta_h, delta_target, delta_h, options.weight_growth,
                        [&](double d) { return spec_at(1.0, d); }, &out.delta_path, "delta");

  if (!last) {
    out.profile = seed;
    out.profile.converged = false;
    if (out.message.empty()) out.message = "no unstable solve converged";
    return out;
  }
  try {
    similarity::F0Options od = o;
    od.delta = delta;
    out.profile = finish(n, N, spec_at(kappa, delta), *last, od);
  } catch (const Error& e) {
    out.profile.converged = false;
    out.message += std::string(" profile sampling failed: ") + e.what();
  }
  if (kappa < 1.0 || delta != delta_target) out.profile.converged = false;
  if (out.message.empty()) out.message = out.profile.message;
  return out;
}

std::string to_json(const UnstableExponents& e) {
  return nlohmann::json{{"n", e.n},
                        {"p", e.p},
                        {"N", e.dimension},
                        {"alpha", e.alpha},
                        {"beta", e.beta},
                        {"p0", e.p0},
                        {"balance_mobility", e.balance_mobility},
                        {"balance_diffusion", e.balance_diffusion},
                        {"printed_mobility", e.printed_mobility},
                        {"printed_diffusion", e.printed_diffusion},
                        {"identities_ok", e.identities_ok}}
      .dump();
}

std::string to_json(const UnstableProfile& p) {
  auto j = nlohmann::json::parse(similarity::to_json(p.profile));
  j["exponents"] = nlohmann::json::parse(to_json(p.exponents));
  j["homotopy_path"] = p.path;
  j["homotopy_delta_path"] = p.delta_path;
  j["homotopy_message"] = p.message;
  return j.dump();
}

}  // namespace tfe10::unstable
