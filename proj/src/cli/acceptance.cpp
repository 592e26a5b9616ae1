#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "tfe10/acceptance.hpp"
#include "tfe10/branching.hpp"
#include "tfe10/continuation.hpp"
#include "tfe10/core/quadrature.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/similarity.hpp"
#include "tfe10/spectral.hpp"
#include "tfe10/unstable.hpp"

namespace tfe10::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string sci(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::scientific << v;
  return s.str();
}

std::string fix(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

Outcome kernel_normalization() {
  const double m = spectral::kernel_mass(1);
  const double err = std::abs(m - 1.0);
  return {err <= 1e-8, "int F = " + fix(m, 12) + ", error " + sci(err)};
}

Outcome kernel_decay() {
  const auto grid = Grid::from_rule(QuadratureRule::uniform(0.0, 140.0, 1400));
  const spectral::Kernel K(1, grid);
  const auto d = spectral::decay_rate(K, 5.0);
  const double rel = std::abs(d.d_fit / d.d_formula - 1.0);
  double best_p = 0.0, best_r2 = -1.0;
  for (const auto& [p, r2] : d.r_squared_by_exponent)
    if (r2 > best_r2) best_r2 = r2, best_p = p;
  const bool prefers = std::abs(best_p - 10.0 / 9.0) < 1e-12;
  return {rel <= 0.02 && prefers, "d_fit " + fix(d.d_fit) + " vs " + fix(d.d_formula) + " (" + fix(100 * rel, 2) +
                                      "%), best exponent " + fix(best_p, 4) + ", R^2 " + fix(best_r2, 7)};
}

Outcome biorthogonality() {
  const auto grid = Grid::from_rule(QuadratureRule::uniform(0.0, 330.0, 330));
  const spectral::Kernel K(1, grid);
  const auto M = spectral::biorthogonality_matrix(8, K);
  double err = 0.0;
  for (int j = 0; j <= 8; ++j)
    for (int k = 0; k <= 8; ++k) err = std::max(err, std::abs(M[j][k] - (j == k ? 1.0 : 0.0)));
  return {err <= 1e-6, "max |<psi_k, psi*_j> - delta| = " + sci(err) + " for k, j <= 8"};
}

RadialProfile gaussian(double mean) {
  const auto g = Grid::from_rule(QuadratureRule::uniform(-20.0, 20.0, 80));
  RadialProfile u;
  u.y.assign(g.points().begin(), g.points().end());
  u.weights.assign(g.weights().begin(), g.weights().end());
  for (double y : u.y) u.f.push_back(std::exp(-0.5 * (y - mean) * (y - mean)) / std::sqrt(2.0 * std::numbers::pi));
  return u;
}

Outcome semigroup_convergence() {
  std::vector<double> tau;
  for (double t = 30.0; t <= 90.0; t += 5.0) tau.push_back(t);
  const auto generic = spectral::rescaled_convergence(gaussian(1.0), tau);
  const auto centred = spectral::rescaled_convergence(gaussian(0.0), tau);
  const bool ok = std::abs(generic.rate / 0.1 - 1.0) <= 0.1 && std::abs(centred.rate / 0.2 - 1.0) <= 0.1;
  return {ok, "rate " + fix(generic.rate, 4) + " (unit mass), " + fix(centred.rate, 4) + " (zero first moment)"};
}

Outcome branching_consistency() {
  const auto m1 = branching::mu10(1);
  const auto m2 = branching::mu10(2);
  const double e1 = std::abs(m1.mu10 + 0.01), e2 = std::abs(m2.mu10 + 0.04);
  return {e1 <= 1e-3 && e2 <= 4e-3, "mu10 = " + fix(m1.mu10, 9) + " (N=1, error " + sci(e1) + "), " +
                                        fix(m2.mu10, 9) + " (N=2, error " + sci(e2) + ")"};
}

Outcome nonlinear_profile() {
  const auto f = similarity::solve_f0(1.0, 1);
  if (!f.y0) return {false, "no interface: " + f.message};
  double worst = 0.0;
  for (double r : f.residuals) worst = std::max(worst, std::abs(r));
  const double deadband = 10.0 * f.delta;
  const int outer = similarity::count_sign_changes(f.profile, deadband, 0.8 * *f.y0);
  const int total = similarity::count_sign_changes(f.profile, deadband);
  const bool ok = f.converged && f.residuals.size() == 5 && worst <= 1e-8 && f.interior_residual <= 1e-6 && outer >= 2;
  return {ok, "y0 " + fix(*f.y0, 5) + ", interface residuals " + sci(worst) + ", interior " + sci(f.interior_residual) +
                  ", sign changes " + std::to_string(total) + " total, " + std::to_string(outer) +
                  " in the outer 20% (needs 2)"};
}

Outcome homotopy_limit() {
  const auto f = similarity::solve_f0(1e-3, 1);
  if (!f.converged) return {false, "solve at n = 1e-3 failed: " + f.message};
  const double d = similarity::kernel_distance(f, 0.8);
  return {d <= 5e-2, "sup |f/M - F| on 80% of the support = " + sci(d) + ", y0 " + fix(*f.y0, 5)};
}

Outcome branch_trace() {
  continuation::StepPolicy policy;
  for (int i = 1; i <= 10; ++i) policy.checkpoints.push_back(i / 10.0);
  const auto b = continuation::trace_branch(1e-3, 1.0, 1, policy);
  int bad = 0;
  std::string first_bad;
  bool alpha_exact = true;
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    if (auto why = continuation::revalidate(b, i); !why.empty()) {
      if (!bad) first_bad = why;
      ++bad;
    }
    if (b.points[i].alpha0 != similarity::alpha0(b.points[i].n, 1).alpha) alpha_exact = false;
  }

  continuation::StepPolicy half = policy;
  half.initial_step /= 2.0;
  half.max_step /= 2.0;
  const auto h = continuation::trace_branch(1e-3, 1.0, 1, half);
  double drift = 0.0;
  int compared = 0;
  for (std::size_t i = 0; i < b.points.size(); ++i)
    for (std::size_t j = 0; j < h.points.size(); ++j) {
      if (b.points[i].n != h.points[j].n) continue;
      if (std::find(policy.checkpoints.begin(), policy.checkpoints.end(), b.points[i].n) == policy.checkpoints.end())
        continue;
      ++compared;
      drift = std::max(drift, std::abs(b.points[i].y0 - h.points[j].y0));
      const auto A = continuation::point_profile(b, i, 2001), B = continuation::point_profile(h, j, 2001);
      for (std::size_t k = 0; k < A.f.size(); ++k) drift = std::max(drift, std::abs(A.f[k] - B.f[k]));
    }

  const bool reached = b.termination == continuation::BranchTermination::reached_n_max &&
                       h.termination == continuation::BranchTermination::reached_n_max;
  const bool ok = reached && b.points.size() >= 20 && bad == 0 && alpha_exact && compared == 10 && drift <= 1e-6;
  std::string detail = std::to_string(b.points.size()) + " points, " + std::to_string(bad) + " failing revalidation, alpha0 " +
                       (alpha_exact ? "exact" : "inexact") + ", step-halving difference " + sci(drift) + " at " +
                       std::to_string(compared) + " checkpoints";
  if (!reached) detail += ", termination " + continuation::to_string(b.termination) + " / " + continuation::to_string(h.termination);
  if (bad) detail += " (" + first_bad + ")";
  return {ok, detail};
}

Outcome linear_family() {
  const auto grid = Grid::uniform(0.0, 15.0, 3001);
  double worst = 0.0;
  std::vector<int> counts;
  for (int k = 0; k <= 3; ++k) {
    const auto f = similarity::solve_fk_linear(k, 1, grid);
    worst = std::max(worst, f.interior_residual);
    counts.push_back(similarity::count_sign_changes(f.profile, 1e-12));
  }
  const bool monotone = std::is_sorted(counts.begin(), counts.end());
  std::string c;
  for (int v : counts) c += (c.empty() ? "" : ", ") + std::to_string(v);
  return {worst <= 1e-5 && monotone, "max equation residual " + sci(worst) + ", sign changes on [0, 15]: " + c};
}

Outcome unstable_algebra() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> un(0.0, 3.0), up(1e-3, 10.0);
  double worst = 0.0;
  int failed = 0;
  for (int i = 0; i < 1000; ++i) {
    const double n = un(rng), p = n + 1.0 + up(rng);
    const auto e = unstable::exponents_unstable(n, p, 1);
    if (!e.identities_ok) ++failed;
    const double scale = std::max({1.0, n, p});
    worst = std::max({worst, std::abs(e.balance_mobility) / scale, std::abs(e.balance_diffusion) / scale});
  }
  double p0_err = 0.0;
  for (int N = 1; N <= 3; ++N)
    for (int i = 0; i <= 300; ++i) {
      const double n = 0.01 * i;
      const auto e = unstable::exponents_unstable(n, unstable::p_critical(n, N), N);
      const double target = N / (10.0 + N * n);
      p0_err = std::max(p0_err, std::abs(e.alpha - target) / target);
    }
  int band_errors = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double k = 3.0 * (i - 0.5) / 1000.0;
    const bool growing = unstable::unstable_symbol(k) > 0.0;
    if (growing != (k < 1.0)) ++band_errors;
  }
  const auto band = unstable::unstable_band();
  const double eps = std::numeric_limits<double>::epsilon();
  const bool ok = failed == 0 && worst <= 16 * eps && p0_err <= 16 * eps && band_errors == 0 && band.lower == 0.0 &&
                  band.upper == 1.0;
  return {ok, "scaling identities max " + sci(worst) + " (" + std::to_string(failed) + " failures), alpha(n, p0) error " +
                  sci(p0_err) + ", band sign errors " + std::to_string(band_errors) + "/1000, argmax " + fix(band.argmax, 6)};
}

// Real roots of A x^2 + B x + C in [0, 1], counted by sign changes at the
// endpoints and the vertex.
int quadratic_oracle(double A, double B, double C) {
  auto F = [&](double x) { return (A * x + B) * x + C; };
  std::vector<double> xs{0.0};
  if (A != 0.0) {
    const double v = -B / (2.0 * A);
    if (v > 0.0 && v < 1.0) xs.push_back(v);
  }
  xs.push_back(1.0);
  int count = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if ((F(xs[i]) > 0.0) != (F(xs[i + 1]) > 0.0)) ++count;
  return count;
}

// Intersections of an ellipse (given by centre, semi-axes and angle) with a
// conic, by sign changes of the conic along the ellipse's parametrization.
int conic_oracle(double cx, double cy, double a, double b, double th, const Conic& g) {
  const int M = 200000;
  int count = 0;
  double prev = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double t = 2.0 * std::numbers::pi * i / M;
    const double u = a * std::cos(t), v = b * std::sin(t);
    const double x = cx + std::cos(th) * u - std::sin(th) * v, y = cy + std::sin(th) * u + std::cos(th) * v;
    const double s = g(x, y);
    if (i > 0 && (s > 0.0) != (prev > 0.0)) ++count;
    prev = s;
  }
  return count;
}

Conic ellipse_conic(double cx, double cy, double a, double b, double th) {
  const double c = std::cos(th), s = std::sin(th);
  const double m11 = c * c / (a * a) + s * s / (b * b), m22 = s * s / (a * a) + c * c / (b * b);
  const double m12 = c * s * (1.0 / (a * a) - 1.0 / (b * b));
  Conic q;
  q.A = m11;
  q.B = m22;
  q.E = 2.0 * m12;
  q.C = -2.0 * (m11 * cx + m12 * cy);
  q.D = -2.0 * (m12 * cx + m22 * cy);
  q.F0 = m11 * cx * cx + 2.0 * m12 * cx * cy + m22 * cy * cy - 1.0;
  return q;
}

Outcome branch_counts() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int quad_mismatch = 0;
  double root_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double A = u(rng), B = u(rng), C = u(rng);
    const auto r = branching::quadratic_branch_count({A, B, C, 0.0});
    if (!r.count || *r.count != quadratic_oracle(A, B, C)) ++quad_mismatch;
    for (double x : r.roots) {
      // Textbook closed form as the independent check on the root values.
      const double d = std::sqrt(std::max(0.0, B * B - 4.0 * A * C));
      const double x1 = (-B - d) / (2.0 * A), x2 = (-B + d) / (2.0 * A);
      root_err = std::max(root_err, std::min(std::abs(x - x1), std::abs(x - x2)));
    }
  }

  std::uniform_real_distribution<double> centre(-1.0, 1.0), axis(0.3, 1.5), angle(0.0, std::numbers::pi);
  int conic_mismatch = 0, above_four = 0;
  std::array<int, 5> histogram{};
  for (int i = 0; i < 100; ++i) {
    const double cx = centre(rng), cy = centre(rng), a = axis(rng), b = axis(rng), th = angle(rng);
    const Conic f1 = ellipse_conic(cx, cy, a, b, th);
    Conic f2;
    f2.A = u(rng), f2.B = u(rng), f2.C = u(rng), f2.D = u(rng), f2.E = u(rng), f2.F0 = u(rng);
    const auto r = branching::conic_branch_count(f1, f2);
    const int oracle = conic_oracle(cx, cy, a, b, th, f2);
    const int got = r.count.value_or(-1);
    if (got != oracle) ++conic_mismatch;
    if (got > 4) ++above_four;
    if (got >= 0 && got <= 4) ++histogram[got];
  }
  std::string hist;
  for (int v : histogram) hist += (hist.empty() ? "" : "/") + std::to_string(v);
  const bool ok = quad_mismatch == 0 && root_err <= 1e-9 && conic_mismatch == 0 && above_four == 0;
  return {ok, "quadratic mismatches " + std::to_string(quad_mismatch) + "/1000 (root error " + sci(root_err) +
                  "), conic mismatches " + std::to_string(conic_mismatch) + "/100, counts 0..4: " + hist};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {"kernel normalization", kernel_normalization},
      {"kernel decay law", kernel_decay},
      {"biorthogonality", biorthogonality},
      {"semigroup convergence", semigroup_convergence},
      {"branching vs exact mu10", branching_consistency},
      {"nonlinear profile n=1", nonlinear_profile},
      {"homotopy limit n->0", homotopy_limit},
      {"branch trace", branch_trace},
      {"linear eigenfamily", linear_family},
      {"unstable algebra", unstable_algebra},
      {"branch-count engines", branch_counts},
  };
  return c;
}

}  // namespace

Check run_criterion(int id) {
  if (id < 1 || id > criterion_count) throw InvalidArgument("no acceptance criterion " + std::to_string(id));
  const auto& c = criteria()[static_cast<std::size_t>(id - 1)];
  Check out;
  out.id = id;
  out.name = c.name;
  const auto t0 = Clock::now();
  try {
    const auto r = c.run();
    out.passed = r.passed;
    out.detail = r.detail;
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("threw: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

std::vector<Check> run(std::span<const int> ids, std::ostream* progress) {
  std::vector<int> todo(ids.begin(), ids.end());
  if (todo.empty())
    for (int i = 1; i <= criterion_count; ++i) todo.push_back(i);
  std::vector<Check> out;
  for (int id : todo) {
    out.push_back(run_criterion(id));
    if (progress) *progress << format_line(out.back(), true) << std::flush;
  }
  return out;
}

std::string format_line(const Check& c, bool timing) {
  std::ostringstream s;
  s << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << c.detail;
  if (timing) s << " (" << fix(c.seconds, 1) << " s)";
  s << "\n";
  return s.str();
}

std::string format_table(const std::vector<Check>& checks, bool timing) {
  std::string out;
  int passed = 0;
  for (const auto& c : checks) {
    out += format_line(c, timing);
    passed += c.passed;
  }
  out += std::to_string(passed) + "/" + std::to_string(checks.size()) + " criteria passed\n";
  return out;
}

}  // namespace tfe10::acceptance
