#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tfe10/errors.hpp"
#include "tfe10/odeshoot.hpp"

namespace tfe10::odeshoot {

Rhs radial_rhs(const ModelParameters& pm) {
  if (pm.dimension < 1 || pm.dimension > 3)
    throw UnsupportedParameter("radial models support N in {1, 2, 3}");
  if (pm.n > 0.0 && !(pm.delta > 0.0)) throw InvalidArgument("delta must be positive when n > 0");
  return [pm](double r, std::span<const double> u, std::span<double> du) {
    const double nm1 = pm.dimension - 1.0;
    for (int j = 0; j < 4; ++j) {
      du[2 * j] = u[2 * j + 1];
      du[2 * j + 1] = r > 0.0 ? u[2 * j + 2] - nm1 / r * u[2 * j + 1] : u[2 * j + 2] / pm.dimension;
    }
    const double f = u[0];
    double flux = 0.0;
    if (pm.model == RadialModel::unstable) flux = pm.flux_coefficient * pm.p * std::pow(std::abs(f), pm.p - 1.0) * u[1];
    du[8] = (flux - pm.beta * r * f) / regularized_mobility(f, pm.n, pm.delta);
  };
}

void ShootingSpec::validate() const {
  if (system_dimension == 0) throw InvalidArgument("shooting spec: system dimension is zero");
  if (!rhs) throw InvalidArgument("shooting spec: missing right-hand side");
  if (origin_state.size() != system_dimension)
    throw InvalidArgument("shooting spec: origin state has the wrong size");
  for (auto i : unknown_indices)
    if (i >= system_dimension) throw InvalidArgument("shooting spec: unknown index out of range");
  for (auto i : target_indices)
    if (i >= system_dimension) throw InvalidArgument("shooting spec: target index out of range");
  if (target_values.size() != target_indices.size())
    throw InvalidArgument("shooting spec: target values and indices differ in length");
  if (unknown_count() != target_indices.size()) {
    std::ostringstream msg;
    msg << "shooting spec: " << unknown_count() << " unknowns but " << target_indices.size()
        << " target conditions";
    throw InvalidArgument(msg.str());
  }
  if (params.n > 0.0 && !(params.delta > 0.0))
    throw InvalidArgument("shooting spec: delta must be positive when n > 0");
  if (!free_boundary && !(y_end > 0.0)) throw InvalidArgument("shooting spec: y_end must be positive");
}

IVPResult integrate(const ShootingSpec& spec, std::span<const double> unknowns,
                    const IntegratorOptions& options) {
  if (unknowns.size() != spec.unknown_count())
    throw InvalidArgument("shooting vector has the wrong length");
  State u0 = spec.origin_state;
  for (std::size_t i = 0; i < spec.unknown_indices.size(); ++i) u0[spec.unknown_indices[i]] = unknowns[i];
  if (!spec.free_boundary) return integrate(spec.rhs, 0.0, u0, spec.y_end, options);

  const double L = unknowns.back();
  if (!(L > 0.0) || !std::isfinite(L)) throw EvaluationError("free boundary must be positive");
  const Rhs& g = spec.rhs;
  Rhs scaled = [&g, L](double s, std::span<const double> u, std::span<double> du) {
    g(s * L, u, du);
    for (double& v : du) v *= L;
  };
  IVPResult res = integrate(scaled, 0.0, u0, 1.0, options);
  for (std::size_t i = 0; i < res.t.size(); ++i) {
    res.t[i] *= L;
    for (double& v : res.du[i]) v /= L;
  }
  return res;
}

std::vector<double> shooting_residual(const ShootingSpec& spec, std::span<const double> unknowns,
                                      const IntegratorOptions& options, IVPResult* trajectory) {
  IVPResult res = integrate(spec, unknowns, options);
  if (!res.reached_end()) {
    std::ostringstream msg;
    msg << "integration stopped (" << to_string(res.termination) << ") at y = " << res.t.back();
    throw EvaluationError(msg.str());
  }
  std::vector<double> r(spec.target_indices.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = res.final_state()[spec.target_indices[i]] - spec.target_values[i];
  if (trajectory) *trajectory = std::move(res);
  return r;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ShootResult shoot(const ShootingSpec& spec, std::vector<double> guess, const ShootOptions& options) {
  spec.validate();
  if (guess.size() != spec.unknown_count()) throw InvalidArgument("guess has the wrong length");
  try {
    shooting_residual(spec, guess, options.integrator);
  } catch (const EvaluationError& e) {
    throw EvaluationError(std::string("shooting window: the initial guess fails (") + e.what() +
                          "); try a different guess");
  }

  auto residual = [&](std::span<const double> x) {
    return shooting_residual(spec, x, options.integrator);
  };
  // Integrator options that replay the adaptive mesh of the trajectory at x.
  auto frozen_at = [&](std::span<const double> x) {
    IVPResult base = integrate(spec, x, options.integrator);
    if (!base.reached_end()) throw EvaluationError("base trajectory for the Jacobian failed");
    IntegratorOptions frozen = options.integrator;
    frozen.stops.clear();
    frozen.replay_mesh = base.t;
    if (spec.free_boundary)
      for (double& v : frozen.replay_mesh) v /= x.back();
    frozen.replay_mesh.front() = 0.0;
    frozen.replay_mesh.back() = spec.free_boundary ? 1.0 : spec.y_end;
    return frozen;
  };
  NewtonOptions nopt = options.newton;
  nopt.jacobian = [&](std::span<const double> x) {
    const IntegratorOptions frozen = frozen_at(x);
    ResidualFunction replay = [&](std::span<const double> z) {
      return shooting_residual(spec, z, frozen);
    };
    return finite_difference_jacobian(replay, x, nopt.parallel_jacobian);
  };

  ShootResult out;
  NewtonReport rep;
  try {
    rep = solve_system(residual, guess, nopt);
  } catch (const DegenerateRootError& e) {
    out.converged = false;
    out.message = e.what();
    out.unknowns = guess;
    out.residuals = shooting_residual(spec, guess, options.integrator, &out.trajectory);
    for (double r : out.residuals) out.residual_norm = std::max(out.residual_norm, std::abs(r));
    return out;
  }
  out.unknowns = rep.x;
  out.iterations = rep.iterations;
  out.damping_history = rep.damping_history;
  out.message = rep.message;
  out.residuals = shooting_residual(spec, rep.x, options.integrator, &out.trajectory);
  out.residual_norm = 0.0;
  for (double r : out.residuals) out.residual_norm = std::max(out.residual_norm, std::abs(r));
  out.converged = out.residual_norm <= options.residual_tol;
  if (out.converged && !rep.converged) out.message = "converged to the boundary tolerance (Newton: " + rep.message + ")";

  // Adaptive re-meshing makes the residual noisy at the delta layer; the
  // frozen-mesh residual is smooth, so Newton on it can go below that noise.
  for (int pass = 0; pass < options.frozen_mesh_passes && !out.converged; ++pass) {
    std::vector<double> x = out.unknowns;
    if (pass == 0 && max_abs(shooting_residual(spec, guess, options.integrator)) < out.residual_norm) x = guess;
    try {
      const IntegratorOptions frozen = frozen_at(x);
      ResidualFunction replay = [&](std::span<const double> z) { return shooting_residual(spec, z, frozen); };
      NewtonOptions fo = options.newton;
      fo.jacobian = [&](std::span<const double> z) {
        return finite_difference_jacobian(replay, z, fo.parallel_jacobian);
      };
      fo.tol = std::min(fo.tol, 0.01 * options.residual_tol);
      const auto fr = solve_system(replay, x, fo);
      const auto res = shooting_residual(spec, fr.x, options.integrator);
      const double norm = max_abs(res);
      out.iterations += fr.iterations;
      if (norm < out.residual_norm) {
        out.unknowns = fr.x;
        out.residuals = shooting_residual(spec, fr.x, options.integrator, &out.trajectory);
        out.residual_norm = norm;
        out.converged = norm <= options.residual_tol;
        out.message = out.converged ? "converged on a frozen mesh" : fr.message;
      } else {
        break;
      }
    } catch (const Error& e) {
      out.message += std::string("; frozen-mesh pass failed: ") + e.what();
      break;
    }
  }
  if (spec.free_boundary) out.interface = rep.x.back();
  return out;
}

double interior_consistency(const ShootingSpec& spec, std::span<const double> unknowns,
                            std::size_t points, const IntegratorOptions& options) {
  if (points < 16) throw InvalidArgument("interior check needs at least 16 points");
  const double span = spec.free_boundary ? 1.0 : spec.y_end;
  IntegratorOptions o = options;
  o.replay_mesh.clear();
  o.stops.clear();
  for (std::size_t i = 1; i + 1 < points; ++i)
    o.stops.push_back(span * static_cast<double>(i) / static_cast<double>(points - 1));
  const IVPResult res = integrate(spec, unknowns, o);
  if (!res.reached_end()) throw EvaluationError("interior check: integration did not reach the end");

  // Samples on the uniform lattice; every stop is a mesh point.
  const double L = spec.free_boundary ? unknowns.back() : 1.0;
  std::vector<const State*> u, du;
  std::size_t k = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double target = L * span * static_cast<double>(i) / static_cast<double>(points - 1);
    while (k + 1 < res.t.size() && std::abs(res.t[k] - target) > 1e-12 * std::max(1.0, target)) ++k;
    u.push_back(&res.u[k]);
    du.push_back(&res.du[k]);
  }
  const double h = L * span / static_cast<double>(points - 1);
  static constexpr double c[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};
  double worst = 0.0;
  for (std::size_t comp = 0; comp < spec.system_dimension; ++comp) {
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < points; ++i) scale = std::max(scale, std::abs((*du[i])[comp]));
    if (scale == 0.0) continue;
    for (std::size_t i = 3; i + 3 < points; ++i) {
      double d = 0.0;
      for (int j = 1; j <= 3; ++j) d += c[j - 1] * ((*u[i + j])[comp] - (*u[i - j])[comp]);
      err = std::max(err, std::abs(d / h - (*du[i])[comp]));
    }
    worst = std::max(worst, err / scale);
  }
  return worst;
}

RadialProfile to_profile(const IVPResult& traj, int dimension, std::optional<double> interface) {
  RadialProfile p;
  p.dimension = dimension;
  p.interface = interface;
  p.y = traj.t;
  const std::size_t m = traj.u.empty() ? 0 : traj.u.front().size();
  p.f.resize(traj.t.size());
  p.derivatives.assign(m, std::vector<double>(traj.t.size()));
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    p.f[i] = traj.u[i][0];
    for (std::size_t j = 1; j < m; ++j) p.derivatives[j - 1][i] = traj.u[i][j];
    if (m > 0) p.derivatives[m - 1][i] = traj.du[i][m - 1];
  }
  return p;
}

std::string trajectory_header(int dimension) {
  if (dimension == 1) return "y,f,f1,f2,f3,f4,f5,f6,f7,f8,f9";
  return "y,f,df,lap1,dlap1,lap2,dlap2,lap3,dlap3,lap4,dlap4";
}

std::string diagnostics_json(const ShootResult& r) {
  nlohmann::json j;
  j["unknowns"] = r.unknowns;
  j["residuals"] = r.residuals;
  j["residual_norm"] = r.residual_norm;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["termination"] = to_string(r.trajectory.termination);
  j["message"] = r.message;
  j["damping_history"] = r.damping_history;
  if (r.interface) j["interface"] = *r.interface;
  else j["interface"] = nullptr;
  return j.dump();
}

}  // namespace tfe10::odeshoot
