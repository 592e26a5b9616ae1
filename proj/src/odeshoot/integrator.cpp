#include <algorithm>
#include <cmath>
#include <limits>

#include "tfe10/errors.hpp"
#include "tfe10/odeshoot.hpp"

namespace tfe10::odeshoot {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const Rhs& rhs;
  std::size_t n;
  std::vector<double> k2, k3, k4, k5, k6, k7, tmp;

  Stepper(const Rhs& f, std::size_t dim)
      : rhs(f), n(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim) {}

  // One step from (t, u, k1 = G(t,u)); writes u_new, k7 = G(t+h, u_new) and the error vector.
  void step(double t, const State& u, const State& k1, double h, State& un, State& err) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * a21 * k1[i];
    rhs(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = u[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = u[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      un[i] = u[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, un, k7);
    for (std::size_t i = 0; i < n; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }
};

bool finite_state(const State& u) {
  return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
}

double max_abs(const State& u) {
  double m = 0.0;
  for (double x : u) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::reached_end: return "reached_end";
    case Termination::blow_up: return "blow_up";
    case Termination::step_underflow: return "step_underflow";
    case Termination::step_limit: return "step_limit";
  }
  return "unknown";
}

State IVPResult::interpolate(double at) const {
  if (t.empty()) throw InvalidArgument("empty trajectory");
  if (at <= t.front()) return u.front();
  if (at >= t.back()) return u.back();
  const auto it = std::upper_bound(t.begin(), t.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[i + 1] - t[i];
  const double s = (at - t[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  State out(u[i].size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = h00 * u[i][k] + h10 * h * du[i][k] + h01 * u[i + 1][k] + h11 * h * du[i + 1][k];
  return out;
}

IVPResult integrate(const Rhs& rhs, double t0, std::span<const double> u0, double t1,
                    const IntegratorOptions& o) {
  if (!(t1 > t0)) throw InvalidArgument("integrate needs t1 > t0");
  if (!(o.rtol > 0.0) || !(o.atol > 0.0)) throw InvalidArgument("tolerances must be positive");
  const std::size_t n = u0.size();
  Stepper st(rhs, n);
  IVPResult res;
  State u(u0.begin(), u0.end()), k1(n), un(n), err(n);
  rhs(t0, u, k1);
  res.t.push_back(t0);
  res.u.push_back(u);
  res.du.push_back(k1);
  double t = t0;

  auto accept = [&](double tn) {
    t = tn;
    u.swap(un);
    k1 = st.k7;
    res.t.push_back(t);
    res.u.push_back(u);
    res.du.push_back(k1);
    ++res.accepted_steps;
  };
  auto blown = [&](const State& s) { return !finite_state(s) || max_abs(s) > o.blowup_threshold; };

  if (!o.replay_mesh.empty()) {
    if (o.replay_mesh.front() != t0 || o.replay_mesh.back() != t1)
      throw InvalidArgument("replay mesh must span [t0, t1]");
    for (std::size_t i = 1; i < o.replay_mesh.size(); ++i) {
      st.step(t, u, k1, o.replay_mesh[i] - t, un, err);
      if (blown(un) || !finite_state(st.k7)) {
        res.termination = Termination::blow_up;
        return res;
      }
      accept(o.replay_mesh[i]);
    }
    res.termination = Termination::reached_end;
    return res;
  }

  // Error-controlled stepping.
  auto norm = [&](const State& a, const State& b, const State& e) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = o.atol + o.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
      m = std::max(m, std::abs(e[i]) / sc);
    }
    return m;
  };

  double h = o.initial_step;
  if (!(h > 0.0)) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = o.atol + o.rtol * std::abs(u[i]);
      d0 = std::max(d0, std::abs(u[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.01 * (t1 - t0));
  }

  std::size_t next_stop = 0;
  while (next_stop < o.stops.size() && o.stops[next_stop] <= t0) ++next_stop;
  bool last_rejected = false;

  while (t < t1) {
    if (res.accepted_steps + res.rejected_steps >= o.max_steps) {
      res.termination = Termination::step_limit;
      return res;
    }
    double target = t1;
    if (next_stop < o.stops.size() && o.stops[next_stop] < t1) target = o.stops[next_stop];
    // Clip to the next stop; absorb slivers so no step is absurdly short.
    double hs = h;
    const bool lands = t + h >= target || target - (t + h) < 1e-12 * std::max(1.0, std::abs(target));
    if (lands) hs = target - t;
    if (hs < o.min_step && !lands) {
      res.termination = Termination::step_underflow;
      return res;
    }
    st.step(t, u, k1, hs, un, err);
    double r = norm(u, un, err);
    if (!finite_state(un) || !finite_state(st.k7)) r = std::numeric_limits<double>::infinity();
    if (r <= 1.0) {
      const double tn = lands ? target : t + hs;
      if (lands && target < t1) ++next_stop;
      res.max_error_ratio = std::max(res.max_error_ratio, r);
      accept(tn);
      if (blown(u)) {
        res.termination = Termination::blow_up;
        return res;
      }
      double fac = r == 0.0 ? 5.0 : 0.9 * std::pow(r, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      last_rejected = false;
      h = lands ? std::max(h, hs * fac) : hs * fac;
    } else {
      ++res.rejected_steps;
      last_rejected = true;
      h = hs * (std::isfinite(r) ? std::max(0.2, 0.9 * std::pow(r, -0.2)) : 0.1);
      if (h < o.min_step) {
        res.termination = Termination::step_underflow;
        return res;
      }
    }
  }
  res.termination = Termination::reached_end;
  return res;
}

double regularized_mobility(double f, double n, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("regularization delta must be positive");
  if (n == 0.0) return 1.0;
  return std::pow(f * f + delta * delta, 0.5 * n);
}

}  // namespace tfe10::odeshoot
