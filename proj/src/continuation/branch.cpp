#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tfe10/continuation.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/io.hpp"

namespace tfe10::continuation {

namespace {

BranchPoint make_point(double n, int N, const odeshoot::ShootResult& r, const similarity::F0Options& o,
                       double step) {
  BranchPoint p;
  p.n = n;
  p.alpha0 = similarity::alpha0(n, N).alpha;
  p.unknowns = r.unknowns;
  p.y0 = r.unknowns.back();
  p.iterations = r.iterations;
  p.residual = r.residual_norm;
  p.step = step;
  const auto spec = similarity::f0_spec(n, N, o);
  const auto fine = similarity::sample_profile(spec, r.unknowns, o.check_points, o.shoot.integrator);
  p.interior_residual = similarity::f0_interior_residual(spec, fine);
  p.sign_changes = similarity::count_sign_changes(fine, 10.0 * spec.params.delta);
  return p;
}

}  // namespace

std::string to_string(BranchTermination t) {
  switch (t) {
    case BranchTermination::reached_n_max: return "reached_n_max";
    case BranchTermination::failed_corrector: return "failed_corrector";
    case BranchTermination::step_underflow: return "step_underflow";
  }
  return "unknown";
}

Branch trace_branch(double n_start, double n_max, int N, const StepPolicy& policy,
                    const similarity::F0Options& options) {
  if (!(n_start > 0.0) || !(n_max >= n_start)) throw InvalidArgument("trace_branch needs 0 < n_start <= n_max");
  if (!(policy.initial_step > 0.0) || !(policy.max_step >= policy.initial_step))
    throw InvalidArgument("step policy needs 0 < initial_step <= max_step");

  Branch b;
  b.dimension = N;
  b.options = options;
  b.options.normalization = 1.0;
  const auto& o = b.options;

  std::vector<double> guess = similarity::f0_kernel_guess(N, o.y0_guess);
  odeshoot::ShootResult seed;
  try {
    seed = odeshoot::shoot(similarity::f0_spec(n_start, N, o), guess, o.shoot);
  } catch (const Error& e) {
    b.termination = BranchTermination::failed_corrector;
    b.diagnostics = std::string("seed solve failed: ") + e.what();
    return b;
  }
  if (!seed.converged) {
    b.termination = BranchTermination::failed_corrector;
    b.diagnostics = "seed solve did not converge: " + odeshoot::diagnostics_json(seed);
    return b;
  }
  b.points.push_back(make_point(n_start, N, seed, o, 0.0));

  std::size_t next_check = 0;
  double dn = policy.initial_step;
  int easy = 0, small_halvings = 0;
  while (b.points.back().n < n_max) {
    const auto& cur = b.points.back();
    constexpr double snap = 1e-12;
    while (next_check < policy.checkpoints.size() && policy.checkpoints[next_check] <= cur.n + snap) ++next_check;
    double target = std::min(n_max, cur.n + dn);
    if (next_check < policy.checkpoints.size()) target = std::min(target, policy.checkpoints[next_check]);
    // Land exactly on checkpoints and n_max instead of leaving slivers.
    if (next_check < policy.checkpoints.size() && policy.checkpoints[next_check] - target < snap)
      target = policy.checkpoints[next_check];
    if (n_max - target < snap) target = n_max;
    const double step = target - cur.n;
    if (!(step > 1e-14)) {
      b.termination = BranchTermination::step_underflow;
      b.diagnostics = "continuation step underflow at n = " + io::format_double(cur.n);
      return b;
    }

    std::vector<double> pred = cur.unknowns;
    if (b.points.size() >= 2) {
      const auto& prev = b.points[b.points.size() - 2];
      for (std::size_t i = 0; i < pred.size(); ++i)
        pred[i] += (cur.unknowns[i] - prev.unknowns[i]) * step / (cur.n - prev.n);
    }

    StepRecord rec{cur.n, step, false, 0, ""};
    std::optional<odeshoot::ShootResult> r;
    try {
      auto s = odeshoot::shoot(similarity::f0_spec(target, N, o), pred, o.shoot);
      rec.iterations = s.iterations;
      if (s.converged) r = std::move(s);
      else rec.note = s.message;
    } catch (const Error& e) {
      rec.note = e.what();
    }

    if (!r) {
      b.history.push_back(rec);
      dn = 0.5 * step;
      easy = 0;
      if (dn < policy.min_step && ++small_halvings >= 3) {
        b.termination = BranchTermination::failed_corrector;
        std::ostringstream msg;
        msg << "corrector failed repeatedly below dn = " << policy.min_step << " at n = " << io::format_double(cur.n)
            << " (candidate turning point or loss of smoothness): " << rec.note;
        b.diagnostics = msg.str();
        return b;
      }
      continue;
    }
    rec.accepted = true;
    b.history.push_back(rec);
    small_halvings = 0;
    b.points.push_back(make_point(target, N, *r, o, step));
    // Clipped steps (checkpoints, n_max) do not shrink the step policy.
    dn = std::max(dn, step);
    if (r->iterations <= policy.easy_iterations && ++easy >= policy.easy_successes) {
      dn = std::min(dn * policy.growth, policy.max_step);
      easy = 0;
    }
  }
  b.termination = BranchTermination::reached_n_max;
  return b;
}

RadialProfile point_profile(const Branch& b, std::size_t i, std::size_t samples) {
  if (i >= b.points.size()) throw InvalidArgument("branch point index out of range");
  const auto& p = b.points[i];
  const auto spec = similarity::f0_spec(p.n, b.dimension, b.options);
  return similarity::sample_profile(spec, p.unknowns, samples, b.options.shoot.integrator);
}

std::string revalidate(const Branch& b, std::size_t i) {
  if (i >= b.points.size()) throw InvalidArgument("branch point index out of range");
  const auto& p = b.points[i];
  const auto spec = similarity::f0_spec(p.n, b.dimension, b.options);
  std::ostringstream why;
  const auto res = odeshoot::shooting_residual(spec, p.unknowns, b.options.shoot.integrator);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  if (worst > 1e-8) why << "boundary residual " << worst << " > 1e-8; ";
  const auto fine = similarity::sample_profile(spec, p.unknowns, b.options.check_points, b.options.shoot.integrator);
  const double interior = similarity::f0_interior_residual(spec, fine);
  if (interior > 1e-6) why << "interior residual " << interior << " > 1e-6; ";
  if (p.alpha0 != b.dimension / (10.0 + b.dimension * p.n)) why << "alpha0 differs from N/(10+Nn); ";
  return why.str();
}

BranchTable branch_report(const Branch& b) {
  if (b.points.empty()) throw InvalidArgument("branch report needs at least one point");
  BranchTable t;
  t.columns = {"n", "alpha0", "y0", "f2_0", "f4_0", "f6_0", "f8_0", "iters", "residual"};
  for (const auto& p : b.points)
    t.rows.push_back({p.n, p.alpha0, p.y0, p.unknowns[0], p.unknowns[1], p.unknowns[2], p.unknowns[3],
                      static_cast<double>(p.iterations), p.residual});
  return t;
}

std::string branch_csv(const Branch& b) {
  const auto t = branch_report(b);
  return io::table_csv(t.columns, t.rows);
}

std::string branch_json(const Branch& b) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : b.points) {
    pts.push_back({{"n", p.n},
                   {"alpha0", p.alpha0},
                   {"y0", p.y0},
                   {"unknowns", p.unknowns},
                   {"iterations", p.iterations},
                   {"residual", p.residual},
                   {"interior_residual", p.interior_residual},
                   {"sign_changes", p.sign_changes},
                   {"step", p.step}});
  }
  nlohmann::json j{{"N", b.dimension},
                   {"termination", to_string(b.termination)},
                   {"diagnostics", b.diagnostics},
                   {"points", pts}};
  return j.dump();
}

}  // namespace tfe10::continuation
