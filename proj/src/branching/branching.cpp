#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tfe10/branching.hpp"
#include "tfe10/core/grid.hpp"
#include "tfe10/errors.hpp"

namespace tfe10::branching {

using Matrix = std::vector<std::vector<double>>;
using nlohmann::json;

namespace {

double sphere_area(int N) { return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N); }

// Quintic smoothstep cutoff: 1 below a, 0 above b.
double cutoff_slope(double r, double a, double b) {
  if (r <= a || r >= b) return 0.0;
  const double s = (r - a) / (b - a);
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / (b - a);
}

double divergence_term(const RadialTable& t, double a, double b, const std::vector<double>& zeros, int levels,
                       double max_panel) {
  const auto rule = QuadratureRule::graded(a, b, zeros, levels, max_panel);
  const auto rn = rule.nodes();
  const auto rw = rule.weights();
  const int N = t.dimension();
  std::vector<double> terms;
  terms.reserve(rn.size());
  for (std::size_t i = 0; i < rn.size(); ++i) {
    const double r = rn[i];
    const auto v = t(r);
    if (v.F == 0.0) continue;
    terms.push_back(rw[i] * std::log(std::abs(v.F)) * v.dG * cutoff_slope(r, a, b) * std::pow(r, N - 1));
  }
  return sphere_area(N) * pairwise_sum(terms);
}

}  // namespace

// ---------------------------------------------------------------------------

Mu10Result mu10(const RadialTable& table, const Mu10Options& o) {
  const int N = table.dimension();
  const double span = table.r_max() - table.r_min();
  const double a = o.cutoff_inner > 0.0 ? o.cutoff_inner : table.r_min() + 0.5 * span;
  const double b = o.cutoff_outer > 0.0 ? o.cutoff_outer : table.r_min() + 0.9 * span;
  if (!(a < b) || b > table.r_max()) throw InvalidArgument("mu10 cutoff needs inner < outer <= table range");
  if (o.levels < 1 || !(o.max_panel > 0.0)) throw InvalidArgument("mu10 grading needs levels >= 1, max_panel > 0");

  Mu10Result out;
  out.dimension = N;
  out.target = -static_cast<double>(N * N) / 100.0;
  out.pairing = table.mass();

  // ln|F| is singular at the zeros of F inside the cutoff band only.
  const auto zeros = bracket_zeros([&](double r) { return table.F(r); }, a, b, 0.05);
  out.zeros_graded = zeros.size();
  out.divergence_term = divergence_term(table, a, b, zeros, o.levels, o.max_panel);
  const double finer = divergence_term(table, a, b, zeros, o.levels + 8, 0.5 * o.max_panel);
  out.refinement_delta = std::abs(finer - out.divergence_term);

  const auto panels = static_cast<std::size_t>(std::ceil(span / 0.5));
  const auto rule = QuadratureRule::uniform(table.r_min(), table.r_max(), panels);
  const auto rn = rule.nodes();
  const auto rw = rule.weights();
  std::vector<double> terms(rn.size());
  for (std::size_t i = 0; i < rn.size(); ++i) terms[i] = rw[i] * rn[i] * table.dF(rn[i]) * std::pow(rn[i], N - 1);
  out.drift_term = N / 100.0 * sphere_area(N) * pairwise_sum(terms);

  if (std::abs(out.divergence_term) > o.divergence_tolerance || !std::isfinite(out.divergence_term)) {
    std::ostringstream msg;
    msg << "divergence term " << out.divergence_term << " exceeds " << o.divergence_tolerance
        << "; refine the grading or move the cutoff outward";
    throw SingularityResolutionError(msg.str());
  }
  out.mu10 = (out.divergence_term + out.drift_term) / out.pairing;
  return out;
}

Mu10Result mu10(int N, const Mu10Options& options) {
  if (N < 1 || N > 3) throw UnsupportedParameter("mu10 supports N in {1, 2, 3}");
  const auto kernel = branching_kernel(N);
  return mu10(RadialTable(kernel), options);
}

// ---------------------------------------------------------------------------

DipoleCoefficients dipole_coefficients(const RadialTable& table) {
  DipoleCoefficients d;
  d.pairings = linear_pairings(table, 1);
  d.alpha1 = (table.dimension() + 1) / 10.0;
  d.nondegeneracy = d.pairings.P[0][0] - d.pairings.P[0][1];
  d.nondegenerate = std::abs(d.nondegeneracy) > 1e-6;
  return d;
}

namespace {

struct DipoleState {
  std::array<double, 2> E{};
  Matrix M;
};

DipoleState dipole_equations(const RadialTable& table, const DipoleCoefficients& co, double c1, double c2,
                             double mu, const LogPairingOptions& opts) {
  const std::array<double, 2> c{c1, c2};
  const auto lp = log_pairings(table, 1, c, opts);
  const auto& P = co.pairings.P;
  DipoleState s;
  s.M = lp.M;
  for (int i = 0; i < 2; ++i)
    s.E[i] = -lp.L[i] - co.alpha1 / 10.0 * (P[i][0] * c1 + P[i][1] * c2) + c[i] * mu;
  return s;
}

// mu minimizing |E| for fixed c.
double fitted_mu(const DipoleState& s, double c1, double c2, double mu) {
  return mu - (c1 * s.E[0] + c2 * s.E[1]) / (c1 * c1 + c2 * c2);
}

double printed_mu11(const Matrix& M, const Matrix& P, double alpha1, double c2) {
  const double a = alpha1 / 10.0;
  const double h1 = -(M[0][0] + M[1][0]), h2 = -(M[0][1] + M[1][1]);
  return c2 * ((h1 - h2) - a * (P[0][0] + P[1][0] - P[0][1] - P[1][1])) - h1 + a * (P[0][0] + P[1][0]);
}

}  // namespace

std::array<double, 3> dipole_residual(const RadialTable& table, const DipoleCoefficients& co, double c1,
                                      double c2, double mu, const LogPairingOptions& opts) {
  const auto s = dipole_equations(table, co, c1, c2, mu, opts);
  return {s.E[0], s.E[1], c1 + c2 - 1.0};
}

DipoleReport dipole_solve(const RadialTable& table, const DipoleCoefficients& co, const LogPairingOptions& opts) {
  if (!co.nondegenerate) throw DegenerateRootError("dipole system fails the nondegeneracy condition");
  DipoleReport rep;
  rep.coefficients = co;
  constexpr double tol = 1e-6;
  for (double seed : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    DipoleSolution sol;
    sol.seed = seed;
    double c1 = seed, mu = 0.0;
    try {
      auto s = dipole_equations(table, co, c1, 1.0 - c1, mu, opts);
      mu = fitted_mu(s, c1, 1.0 - c1, mu);
      s = dipole_equations(table, co, c1, 1.0 - c1, mu, opts);
      if (seed == 0.5) rep.symmetric_antisymmetry = std::abs(s.E[0] - s.E[1]);
      auto norm = [](const DipoleState& st) { return std::max(std::abs(st.E[0]), std::abs(st.E[1])); };
      for (int it = 0; it < 20 && norm(s) > tol; ++it) {
        // Jacobian in (c1, mu): dE/dmu = (c1, c2) exactly, dE/dc1 by a one-sided difference.
        const double h = c1 > 0.5 ? -1e-4 : 1e-4;
        const auto sh = dipole_equations(table, co, c1 + h, 1.0 - c1 - h, mu, opts);
        const double j11 = (sh.E[0] - s.E[0]) / h, j21 = (sh.E[1] - s.E[1]) / h;
        const double j12 = c1, j22 = 1.0 - c1;
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14) throw DegenerateRootError("singular dipole Jacobian");
        const double dc = (-s.E[0] * j22 + s.E[1] * j12) / det;
        const double dm = (-s.E[1] * j11 + s.E[0] * j21) / det;
        double lambda = 1.0;
        const double merit = std::hypot(s.E[0], s.E[1]);
        for (;; lambda *= 0.5) {
          auto trial = dipole_equations(table, co, c1 + lambda * dc, 1.0 - c1 - lambda * dc, mu + lambda * dm, opts);
          if (std::hypot(trial.E[0], trial.E[1]) <= (1.0 - 1e-4 * lambda) * merit || lambda < 1e-3) {
            c1 += lambda * dc;
            mu += lambda * dm;
            s = std::move(trial);
            break;
          }
        }
        sol.iterations = it + 1;
      }
      sol.c1 = c1;
      sol.c2 = 1.0 - c1;
      sol.mu11 = mu;
      sol.residual_norm = std::max({std::abs(s.E[0]), std::abs(s.E[1]), std::abs(sol.c1 + sol.c2 - 1.0)});
      sol.converged = sol.residual_norm <= tol;
      sol.printed_mu11 = printed_mu11(s.M, co.pairings.P, co.alpha1, sol.c2);
      if (!sol.converged) sol.message = "Newton stopped above the residual tolerance";
    } catch (const Error& e) {
      sol.message = e.what();
    }
    rep.solutions.push_back(sol);
  }

  std::vector<const DipoleSolution*> ok;
  for (const auto& s : rep.solutions)
    if (s.converged) ok.push_back(&s);
  std::ostringstream diag;
  if (ok.empty()) {
    diag << "no seed converged; existence is not in question but the quadrature or Newton globalization failed";
  } else {
    double c_lo = 1.0, c_hi = 0.0, mu_lo = ok.front()->mu11, mu_hi = mu_lo;
    for (auto* s : ok) {
      c_lo = std::min(c_lo, s->c1);
      c_hi = std::max(c_hi, s->c1);
      mu_lo = std::min(mu_lo, s->mu11);
      mu_hi = std::max(mu_hi, s->mu11);
    }
    rep.continuum = ok.size() > 1 && c_hi - c_lo > 0.1 && mu_hi - mu_lo <= 1e-5;
    if (rep.continuum)
      diag << "converged from every seed at its own c1 with one mu_{1,1} = " << mu_lo
           << ": the logarithmic pairings satisfy L = Lambda c (rotation invariance of the 2D dipole space), "
              "so the solution set is the whole segment c1 + c2 = 1";
    else
      diag << ok.size() << " seeds converged; c1 in [" << c_lo << ", " << c_hi << "], mu in [" << mu_lo << ", "
           << mu_hi << "]";
  }
  rep.diagnostic = diag.str();
  return rep;
}

// ---------------------------------------------------------------------------

QuadraticBranchResult quadratic_branch_count(const QuadraticBranchProblem& p) {
  if (!std::isfinite(p.A) || !std::isfinite(p.B) || !std::isfinite(p.C))
    throw InvalidArgument("quadratic coefficients must be finite");
  QuadraticBranchResult r;
  const double A = p.A, B = p.B, C = p.C;
  auto keep = [&](double x) {
    if (x >= -1e-12 && x <= 1.0 + 1e-12) r.roots.push_back(std::clamp(x, 0.0, 1.0));
  };
  const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
  if (scale == 0.0) {
    r.note = "F vanishes identically; every c2 solves the unperturbed equation and no count is claimed";
    r.linear = true;
    return r;
  }
  r.cond_a = C * (A + B + C) > 0.0;
  if (std::abs(A) <= 1e-14 * scale) {
    r.linear = true;
    if (B != 0.0) keep(-C / B);
    r.count = static_cast<int>(r.roots.size());
    r.note = "A = 0: linear case, at most one root";
    r.perturbation_ok = p.omega_norm <= std::min(std::abs(C), std::abs(A + B + C));
    return r;
  }
  r.vertex = -B / (2.0 * A);
  r.vertex_value = C - B * B / (4.0 * A);
  r.vertex_value_printed = -B / (4.0 * A) + C;
  r.cond_b = C * r.vertex_value < 0.0;
  r.cond_c = r.vertex > 0.0 && r.vertex < 1.0;
  r.perturbation_ok = p.omega_norm <= std::abs(r.vertex_value);

  const double disc = B * B - 4.0 * A * C;
  if (std::abs(disc) <= 1e-14 * (B * B + std::abs(4.0 * A * C))) {
    keep(r.vertex);
  } else if (disc > 0.0) {
    // Cancellation-free pair of roots.
    const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    double x1 = q / A, x2 = C / q;
    if (q == 0.0) x2 = x1;
    if (x1 > x2) std::swap(x1, x2);
    keep(x1);
    if (x2 != x1) keep(x2);
  }
  std::sort(r.roots.begin(), r.roots.end());
  r.roots.erase(std::unique(r.roots.begin(), r.roots.end()), r.roots.end());
  r.count = static_cast<int>(r.roots.size());
  if (r.cond_a && r.cond_b && r.cond_c) r.note = "conditions (a)-(c) hold: two roots in (0, 1)";
  return r;
}

std::string to_string(ConicType t) {
  switch (t) {
    case ConicType::ellipse: return "ellipse";
    case ConicType::circle: return "circle";
    case ConicType::imaginary_ellipse: return "imaginary_ellipse";
    case ConicType::parabola: return "parabola";
    case ConicType::hyperbola: return "hyperbola";
    case ConicType::rectangular_hyperbola: return "rectangular_hyperbola";
    case ConicType::degenerate: return "degenerate";
    case ConicType::not_a_conic: return "not_a_conic";
  }
  return "unknown";
}

namespace {

ConicType classify_by(double disc, double quad_scale, const Conic& c, double det, double scale) {
  const double tol = 1e-12;
  if (std::abs(det) <= tol * scale * scale * scale) return ConicType::degenerate;
  if (std::abs(disc) <= tol * quad_scale * quad_scale) return ConicType::parabola;
  if (disc < 0.0) {
    if ((c.A + c.B) * det > 0.0) return ConicType::imaginary_ellipse;
    if (std::abs(c.A - c.B) <= tol * quad_scale && std::abs(c.E) <= tol * quad_scale) return ConicType::circle;
    return ConicType::ellipse;
  }
  if (std::abs(c.A + c.B) <= tol * quad_scale) return ConicType::rectangular_hyperbola;
  return ConicType::hyperbola;
}

}  // namespace

ConicClassification classify_conic(const Conic& c) {
  for (double v : {c.A, c.B, c.C, c.D, c.E, c.F0})
    if (!std::isfinite(v)) throw InvalidArgument("conic coefficients must be finite");
  ConicClassification out;
  out.discriminant = c.E * c.E - 4.0 * c.A * c.B;
  out.printed_discriminant = c.B * c.B - 4.0 * c.A * c.E;
  const double quad = std::max({std::abs(c.A), std::abs(c.B), std::abs(c.E)});
  const double scale = std::max({quad, std::abs(c.C), std::abs(c.D), std::abs(c.F0)});
  if (quad <= 1e-14 * scale || quad == 0.0) {
    out.type = out.printed_type = ConicType::not_a_conic;
    return out;
  }
  // Symmetric 3x3 matrix of the homogenized form.
  const double a = c.A, b = c.B, h = 0.5 * c.E, g = 0.5 * c.C, f = 0.5 * c.D, k = c.F0;
  const double det = a * (b * k - f * f) - h * (h * k - f * g) + g * (h * f - b * g);
  out.type = classify_by(out.discriminant, quad, c, det, scale);
  const ConicType printed = classify_by(out.printed_discriminant, quad, c, det, scale);
  // The printed rule only separates ellipse, parabola and hyperbola.
  switch (printed) {
    case ConicType::circle:
    case ConicType::imaginary_ellipse: out.printed_type = ConicType::ellipse; break;
    case ConicType::rectangular_hyperbola: out.printed_type = ConicType::hyperbola; break;
    default: out.printed_type = printed;
  }
  const double d2 = 4.0 * c.A * c.B - c.E * c.E;
  if (std::abs(d2) > 1e-14 * quad * quad) {
    Point2 s{(-c.C * 2.0 * c.B + c.E * c.D) / d2, (-2.0 * c.A * c.D + c.E * c.C) / d2};
    out.stationary = s;
    out.stationary_value = c(s.x, s.y);
  }
  return out;
}

ConicBranchResult conic_branch_count(const Conic& f1, const Conic& f2, std::array<double, 2> omega) {
  ConicBranchResult r;
  r.conics = {classify_conic(f1), classify_conic(f2)};
  for (int i = 0; i < 2; ++i) {
    const auto& c = r.conics[i];
    r.perturbation_ok[i] = c.stationary && omega[i] <= std::abs(c.stationary_value);
  }
  for (const auto& c : r.conics) {
    if (c.type == ConicType::not_a_conic || c.type == ConicType::degenerate) {
      r.note = "conic " + std::string(&c == &r.conics[0] ? "1" : "2") + " is " + to_string(c.type) +
               "; no count claimed";
      return r;
    }
  }
  try {
    r.intersections = conic_intersections(f1, f2);
  } catch (const InfiniteIntersectionError& e) {
    r.note = std::string("proportional conics: ") + e.what();
    return r;
  } catch (const ResultantVanishesError& e) {
    r.note = std::string("common component: ") + e.what();
    return r;
  }
  r.count = static_cast<int>(r.intersections.size());
  r.within_bound = *r.count <= 4;
  for (const auto& p : r.intersections)
    if (p.x >= -1e-12 && p.y >= -1e-12 && p.x + p.y <= 1.0 + 1e-12) ++r.count_in_simplex;
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Each assembled coefficient combines at most eight pairings scaled by alpha/10.
double noise_bound(const LinearPairings& p, double scale) {
  return 8.0 * scale * std::max({p.identity_error, p.refinement_delta, 1e-14});
}

}  // namespace

QuadraticAssembly assemble_quadratic_coefficients(const RadialTable& table, int omega_samples,
                                                  const LogPairingOptions& opts) {
  if (omega_samples < 0 || omega_samples == 1) throw InvalidArgument("omega sampling needs 0 or >= 2 samples");
  QuadraticAssembly q;
  q.coefficients = dipole_coefficients(table);
  const auto& P = q.coefficients.pairings.P;
  const double a = q.coefficients.alpha1 / 10.0;
  q.problem.A = -a * (P[0][1] + P[1][1] - P[0][0] - P[1][0]);
  q.problem.B = a * (P[0][0] + 2.0 * P[1][0] - P[1][1]);
  q.problem.C = -a * P[1][0];
  q.galerkin_A = -a * (P[0][0] + P[1][0] - P[0][1] - P[1][1]);
  q.raw_coefficients = {q.problem.A, q.problem.B, q.problem.C};
  q.noise_level = noise_bound(q.coefficients.pairings, a);
  for (double* x : {&q.problem.A, &q.problem.B, &q.problem.C, &q.galerkin_A})
    if (std::abs(*x) <= q.noise_level) *x = 0.0;

  double sup = 0.0, sup_printed = 0.0;
  for (int s = 0; s < omega_samples; ++s) {
    const double c2 = static_cast<double>(s) / (omega_samples - 1);
    const std::array<double, 2> c{1.0 - c2, c2};
    const auto lp = log_pairings(table, 1, c, opts);
    const double w = -lp.L[1] + c2 * (lp.L[0] + lp.L[1]);
    const double wp = lp.L[1] + c2 * (lp.L[0] + lp.L[1]);
    q.c2_samples.push_back(c2);
    q.omega_samples.push_back(w);
    q.omega_printed_samples.push_back(wp);
    sup = std::max(sup, std::abs(w));
    sup_printed = std::max(sup_printed, std::abs(wp));
  }
  q.problem.omega_norm = sup;
  q.analysis = quadratic_branch_count(q.problem);

  std::ostringstream d;
  d << "c2^2 coefficient: printed A = -(alpha1/10) <psi1* + psi2*, y.grad(psi2 - psi1)>, the Galerkin reduction "
       "gives the opposite sign; both are "
    << q.raw_coefficients[0] << " here (noise level " << q.noise_level << ")";
  q.discrepancies.push_back(d.str());
  if (omega_samples > 0) {
    std::ostringstream w;
    w << "perturbation: printed omega = L_2 + c2 (L_1 + L_2) has sup " << sup_printed
      << ", the Galerkin reduction -L_2 + c2 (L_1 + L_2) has sup " << sup;
    q.discrepancies.push_back(w.str());
  }
  return q;
}

std::array<Conic, 2> galerkin_conics(const Matrix& P, double alpha) {
  if (P.size() != 3) throw InvalidArgument("galerkin_conics needs the 3x3 |beta| = 2 pairing matrix");
  // c = v0 + c2 v2 + c3 v3 with c1 = 1 - c2 - c3.
  const std::array<double, 3> v0{1.0, 0.0, 0.0}, v2{-1.0, 1.0, 0.0}, v3{-1.0, 0.0, 1.0};
  auto mul = [&](const std::array<double, 3>& v) {
    std::array<double, 3> w{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w[i] += P[i][j] * v[j];
    return w;
  };
  const auto w0 = mul(v0), w2 = mul(v2), w3 = mul(v3);
  const double s = -alpha / 10.0;
  // c_j (Pc)_i - c_i (Pc)_j for (i, j) = (0, 1) and (0, 2).
  auto conic = [&](int i, int j) {
    auto prod = [&](int a, int b) {
      // Coefficients of c_a (Pc)_b.
      Conic c;
      c.F0 = v0[a] * w0[b];
      c.C = v0[a] * w2[b] + v2[a] * w0[b];
      c.D = v0[a] * w3[b] + v3[a] * w0[b];
      c.A = v2[a] * w2[b];
      c.B = v3[a] * w3[b];
      c.E = v2[a] * w3[b] + v3[a] * w2[b];
      return c;
    };
    const Conic x = prod(j, i), y = prod(i, j);
    return Conic{s * (x.A - y.A), s * (x.B - y.B), s * (x.C - y.C), s * (x.D - y.D), s * (x.E - y.E),
                 s * (x.F0 - y.F0)};
  };
  return {conic(0, 1), conic(0, 2)};
}

SecondLevelAssembly assemble_second_level(const RadialTable& table, int omega_samples,
                                          const LogPairingOptions& opts) {
  if (omega_samples < 0) throw InvalidArgument("omega sampling needs a nonnegative count");
  SecondLevelAssembly s;
  s.pairings = linear_pairings(table, 2);
  s.alpha2 = (table.dimension() + 2) / 10.0;
  const auto& P = s.pairings.P;
  const double a = s.alpha2 / 10.0;
  // P[i][j] = <psi_i^*, y.grad psi_j>, 0-based.
  auto build = [&](double q11) {
    std::array<Conic, 2> c;
    c[0].A = -a * (P[0][0] + P[1][0] - P[2][0] - P[0][1] - P[1][1] + P[2][1]);
    c[0].B = a * (P[0][0] - P[1][0] + P[2][0] - P[0][2] + P[1][2] - P[2][2]);
    c[0].C = a * (2.0 * (P[1][0] - P[2][0]) - (P[1][1] - P[2][1]) + q11);
    c[0].D = a * (2.0 * (P[1][0] - P[2][0]) - (P[1][2] - P[2][2]) - q11);
    c[0].E = a * ((P[0][2] - P[0][1]) -
                  (2.0 * (P[1][0] - P[2][0]) - (P[1][1] - P[2][1]) - (P[1][2] - P[2][2])));
    c[1].A = -a * (P[2][0] - P[2][1]);
    c[1].B = a * (P[1][0] - P[1][2]);
    c[1].C = a * P[2][0];
    c[1].D = -a * P[1][0];
    c[1].E = a * ((P[1][0] - P[1][1]) - (P[2][0] - P[2][2]));
    return c;
  };
  s.printed = build(P[0][0]);
  s.printed_literal = build(s.pairings.Q[0][0]);
  s.galerkin = galerkin_conics(P, s.alpha2);
  s.noise_level = noise_bound(s.pairings, a);
  for (auto* set : {&s.printed, &s.printed_literal, &s.galerkin})
    for (auto& c : *set)
      for (double* x : {&c.A, &c.B, &c.C, &c.D, &c.E, &c.F0})
        if (std::abs(*x) <= s.noise_level) *x = 0.0;

  if (omega_samples > 0) {
    // Points of the closed simplex c2, c3 >= 0, c2 + c3 <= 1 on a triangular lattice.
    int m = 1;
    while ((m + 1) * (m + 2) / 2 < omega_samples) ++m;
    std::array<double, 2> sup{0.0, 0.0};
    int taken = 0;
    for (int i = 0; i <= m && taken < omega_samples; ++i)
      for (int j = 0; i + j <= m && taken < omega_samples; ++j, ++taken) {
        const double c2 = static_cast<double>(i) / m, c3 = static_cast<double>(j) / m;
        const std::array<double, 3> c{1.0 - c2 - c3, c2, c3};
        const auto lp = log_pairings(table, 2, c, opts);
        // Logarithmic part of c_j E_i - c_i E_j, E_i containing -L_i.
        sup[0] = std::max(sup[0], std::abs(-(c[1] * lp.L[0] - c[0] * lp.L[1])));
        sup[1] = std::max(sup[1], std::abs(-(c[2] * lp.L[0] - c[0] * lp.L[2])));
      }
    s.omega_norms = sup;
  }
  s.analysis = conic_branch_count(s.galerkin[0], s.galerkin[1], s.omega_norms.value_or(std::array{0.0, 0.0}));

  auto coeffs = [](const Conic& c) { return std::array{c.A, c.B, c.C, c.D, c.E, c.F0}; };
  static constexpr const char* names[6] = {"A", "B", "C", "D", "E", "F"};
  for (int i = 0; i < 2; ++i) {
    const auto p = coeffs(s.printed[i]), l = coeffs(s.printed_literal[i]);
    for (int k = 0; k < 6; ++k) {
      if (std::abs(p[k] - l[k]) > 1e-6) {
        std::ostringstream d;
        d << names[k] << i + 1 << ": literal <psi_1, y.grad psi_1> gives " << l[k] << ", with psi_1^* it is "
          << p[k];
        s.discrepancies.push_back(d.str());
      }
    }
    const auto g = coeffs(s.galerkin[i]);
    double gq = 0.0, pq = 0.0;
    for (int k : {0, 1, 4}) {
      gq = std::max(gq, std::abs(g[k]));
      pq = std::max(pq, std::abs(p[k]));
    }
    std::ostringstream d;
    d << "conic " << i + 1 << ": printed quadratic part max " << pq << " (" << to_string(classify_conic(s.printed[i]).type)
      << "), Galerkin quadratic part max " << gq << " (" << to_string(s.analysis.conics[i].type) << ")";
    s.discrepancies.push_back(d.str());
  }
  if (s.analysis.conics[0].type == ConicType::not_a_conic && s.analysis.conics[1].type == ConicType::not_a_conic)
    s.discrepancies.push_back(
        "the Galerkin quadratic parts vanish because P = -(N + 2) I within the noise level; the reduced system is "
        "carried entirely by the logarithmic terms");
  s.discrepancies.push_back(
      "omega_2 is printed with grad Delta Psi; the Galerkin form uses grad Delta^4 Psi like omega_1");
  return s;
}

// ---------------------------------------------------------------------------

namespace {

json conic_json(const Conic& c) {
  return {{"A", c.A}, {"B", c.B}, {"C", c.C}, {"D", c.D}, {"E", c.E}, {"F", c.F0}};
}

json classification_json(const ConicClassification& c) {
  json j{{"type", to_string(c.type)},
         {"discriminant", c.discriminant},
         {"printed_discriminant", c.printed_discriminant},
         {"printed_type", to_string(c.printed_type)},
         {"stationary_value", c.stationary_value}};
  j["stationary"] = c.stationary ? json::array({c.stationary->x, c.stationary->y}) : json(nullptr);
  return j;
}

json quadratic_json(const QuadraticBranchResult& r) {
  return {{"roots", r.roots},
          {"count", r.count ? json(*r.count) : json(nullptr)},
          {"linear", r.linear},
          {"conditions", {{"a", r.cond_a}, {"b", r.cond_b}, {"c", r.cond_c}}},
          {"vertex", r.vertex},
          {"vertex_value", r.vertex_value},
          {"vertex_value_printed", r.vertex_value_printed},
          {"perturbation_ok", r.perturbation_ok},
          {"note", r.note}};
}

json conic_result_json(const ConicBranchResult& r) {
  json pts = json::array();
  for (const auto& p : r.intersections) pts.push_back({p.x, p.y});
  return {{"conics", {classification_json(r.conics[0]), classification_json(r.conics[1])}},
          {"intersections", pts},
          {"count", r.count ? json(*r.count) : json(nullptr)},
          {"count_in_simplex", r.count_in_simplex},
          {"within_bound", r.within_bound},
          {"perturbation_ok", r.perturbation_ok},
          {"note", r.note}};
}

json pairings_json(const LinearPairings& p) {
  return {{"k", p.k}, {"P", p.P}, {"identity_error", p.identity_error}, {"refinement_delta", p.refinement_delta}};
}

}  // namespace

std::string to_json(const Mu10Result& r) {
  return json{{"level", 0},
              {"N", r.dimension},
              {"divergence_term", r.divergence_term},
              {"drift_term", r.drift_term},
              {"pairing", r.pairing},
              {"mu10", r.mu10},
              {"target", r.target},
              {"refinement_delta", r.refinement_delta},
              {"zeros_graded", r.zeros_graded}}
      .dump();
}

std::string to_json(const DipoleReport& r) {
  json sols = json::array();
  for (const auto& s : r.solutions)
    sols.push_back({{"seed", s.seed},
                    {"c1", s.c1},
                    {"c2", s.c2},
                    {"mu11", s.mu11},
                    {"residual", s.residual_norm},
                    {"iterations", s.iterations},
                    {"converged", s.converged},
                    {"printed_mu11", s.printed_mu11},
                    {"printed_delta", s.printed_mu11 - s.mu11},
                    {"message", s.message}});
  return json{{"level", 1},
              {"coefficients",
               {{"pairings", pairings_json(r.coefficients.pairings)},
                {"alpha1", r.coefficients.alpha1},
                {"nondegeneracy", r.coefficients.nondegeneracy},
                {"nondegenerate", r.coefficients.nondegenerate}}},
              {"solutions", sols},
              {"continuum", r.continuum},
              {"symmetric_antisymmetry", r.symmetric_antisymmetry},
              {"diagnostic", r.diagnostic}}
      .dump();
}

std::string to_json(const QuadraticBranchResult& r) { return quadratic_json(r).dump(); }

std::string to_json(const ConicBranchResult& r) { return conic_result_json(r).dump(); }

std::string to_json(const QuadraticAssembly& r) {
  return json{{"level", 1},
              {"coefficients", {{"A", r.problem.A}, {"B", r.problem.B}, {"C", r.problem.C}, {"galerkin_A", r.galerkin_A}}},
              {"raw_coefficients", r.raw_coefficients},
              {"noise_level", r.noise_level},
              {"pairings", pairings_json(r.coefficients.pairings)},
              {"omega_norm", r.problem.omega_norm},
              {"c2_samples", r.c2_samples},
              {"omega_samples", r.omega_samples},
              {"omega_printed_samples", r.omega_printed_samples},
              {"analysis", quadratic_json(r.analysis)},
              {"discrepancies", r.discrepancies}}
      .dump();
}

std::string to_json(const SecondLevelAssembly& r) {
  json j{{"level", 2},
         {"pairings", pairings_json(r.pairings)},
         {"alpha2", r.alpha2},
         {"noise_level", r.noise_level},
         {"printed", {conic_json(r.printed[0]), conic_json(r.printed[1])}},
         {"printed_literal", {conic_json(r.printed_literal[0]), conic_json(r.printed_literal[1])}},
         {"galerkin", {conic_json(r.galerkin[0]), conic_json(r.galerkin[1])}},
         {"analysis", conic_result_json(r.analysis)},
         {"discrepancies", r.discrepancies}};
  j["omega_norms"] = r.omega_norms ? json(*r.omega_norms) : json(nullptr);
  return j.dump();
}

}  // namespace tfe10::branching
