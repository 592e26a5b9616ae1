#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "tfe10/core/quadrature.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/spectral.hpp"

// Profiles whose first sample is at y >= 0 are treated as even functions on R.
namespace tfe10::spectral {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

std::vector<double> sample_weights(const RadialProfile& u) {
  if (!u.weights.empty()) {
    if (u.weights.size() != u.y.size()) throw InvalidArgument("profile weights do not match y");
    return u.weights;
  }
  const std::size_t n = u.y.size();
  if (n < 2) throw InvalidArgument("profile needs at least two samples");
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = u.y[i + 1] - u.y[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

bool is_half_line(const RadialProfile& u) { return !u.y.empty() && u.y.front() >= 0.0; }

void check_1d(const RadialProfile& u) {
  if (u.dimension != 1) throw UnsupportedParameter("semigroup operations are 1D");
  if (u.f.size() != u.y.size()) throw InvalidArgument("profile values do not match y");
}

// u0 hat(k) = int u0(z) e^{-ikz} dz.
class Transform {
 public:
  explicit Transform(const RadialProfile& u) : u_(u), w_(sample_weights(u)), half_(is_half_line(u)) {}

  cplx operator()(double k) const {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < u_.y.size(); ++i) {
      const double a = w_[i] * u_.f[i];
      re += a * std::cos(k * u_.y[i]);
      if (!half_) im -= a * std::sin(k * u_.y[i]);
    }
    if (half_) return {2.0 * re, 0.0};
    return {re, im};
  }

  // Largest frequency the samples resolve.
  double nyquist() const {
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < u_.y.size(); ++i) h = std::max(h, u_.y[i + 1] - u_.y[i]);
    return pi / h;
  }

 private:
  const RadialProfile& u_;
  std::vector<double> w_;
  bool half_;
};

// Symmetric Gauss rule on [-K, K].
QuadratureRule frequency_rule(double K) {
  const auto panels = static_cast<std::size_t>(std::max(32.0, std::ceil(8.0 * K)));
  return QuadratureRule::uniform(-K, K, panels);
}

// Rescaled data in Fourier space: What(kappa) = u0hat(kappa s) e^{-kappa^10 (1 - s^10)}, s = e^{-tau/10}.
struct RescaledSpectrum {
  std::vector<double> kappa, weight;
  std::vector<cplx> what;
};

RescaledSpectrum rescaled_spectrum(const RadialProfile& u0, double tau) {
  Transform T(u0);
  const double s = std::exp(-tau / 10.0);
  // e^{-kappa^10 (1 - s^10)} e^{-kappa^10 s^10} bound; kappa s must stay resolved by the samples.
  const double K = std::min(2.5, T.nyquist() / s);
  const auto rule = frequency_rule(K);
  RescaledSpectrum r;
  r.kappa = rule.nodes();
  r.weight = rule.weights();
  r.what.resize(r.kappa.size());
  const double s10 = std::pow(s, 10.0);
  for (std::size_t i = 0; i < r.kappa.size(); ++i) {
    const double k = r.kappa[i];
    r.what[i] = T(k * s) * std::exp(-std::pow(k, 10.0) * (1.0 - s10));
  }
  return r;
}

}  // namespace

std::map<int, double> moments(const RadialProfile& u0, int kmax) {
  check_1d(u0);
  if (kmax < 0) throw InvalidArgument("kmax must be nonnegative");
  const auto w = sample_weights(u0);
  const bool half = is_half_line(u0);
  std::map<int, double> out;
  double fact = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) fact *= k;
    std::vector<double> terms(u0.y.size());
    for (std::size_t i = 0; i < u0.y.size(); ++i) terms[i] = w[i] * std::pow(u0.y[i], k) * u0.f[i];
    double v = pairwise_sum(terms);
    if (half) v = k % 2 ? 0.0 : 2.0 * v;
    out[k] = v / std::sqrt(fact);
  }
  return out;
}

RadialProfile evolve_linear(const RadialProfile& u0, double t, std::span<const double> x) {
  check_1d(u0);
  if (!(t > 0.0)) throw InvalidArgument("evolve_linear needs t > 0");
  Transform T(u0);
  const double K = std::min(std::pow(700.0 / t, 0.1), T.nyquist());
  const auto rule = frequency_rule(K);
  const auto kn = rule.nodes();
  const auto kw = rule.weights();
  std::vector<cplx> spec(kn.size());
  for (std::size_t i = 0; i < kn.size(); ++i)
    spec[i] = kw[i] * T(kn[i]) * std::exp(-std::pow(kn[i], 10.0) * t);

  RadialProfile out;
  out.dimension = 1;
  out.y.assign(x.begin(), x.end());
  out.f.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < kn.size(); ++i) s += (spec[i] * std::exp(cplx(0.0, kn[i] * x[j]))).real();
    out.f[j] = s / (2.0 * pi);
  }
  return out;
}

std::vector<double> rescaled_solution(const RadialProfile& u0, double tau, std::span<const double> y) {
  check_1d(u0);
  if (!(tau >= 0.0)) throw InvalidArgument("rescaled time must be >= 0");
  const auto r = rescaled_spectrum(u0, tau);
  std::vector<double> w(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.kappa.size(); ++i)
      s += r.weight[i] * (r.what[i] * std::exp(cplx(0.0, r.kappa[i] * y[j]))).real();
    w[j] = s / (2.0 * pi);
  }
  return w;
}

ConvergenceTable rescaled_convergence(const RadialProfile& u0, std::span<const double> tau_list) {
  check_1d(u0);
  if (tau_list.size() < 2) throw InvalidArgument("rescaled_convergence needs at least two tau values");
  const double M0 = moments(u0, 0).at(0);
  ConvergenceTable table;
  for (double tau : tau_list) {
    const auto r = rescaled_spectrum(u0, tau);
    // Parseval: ||w - M0 F||^2 = (1/2pi) int |What - M0 e^{-kappa^10}|^2.
    std::vector<double> terms(r.kappa.size());
    for (std::size_t i = 0; i < r.kappa.size(); ++i)
      terms[i] = r.weight[i] * std::norm(r.what[i] - M0 * std::exp(-std::pow(r.kappa[i], 10.0)));
    table.tau.push_back(tau);
    table.error.push_back(std::sqrt(pairwise_sum(terms) / (2.0 * pi)));
  }
  // Least squares slope of ln(error) against tau over the nonzero errors.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t i = 0; i < table.tau.size(); ++i) {
    if (!(table.error[i] > 0.0)) continue;
    const double x = table.tau[i], v = std::log(table.error[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    n += 1;
  }
  table.rate = n >= 2 ? -(n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  const auto [lo, hi] = std::minmax_element(tau_list.begin(), tau_list.end());
  table.short_range = table.rate * (*hi - *lo) < 3.0;
  return table;
}

std::vector<double> truncated_expansion(const RadialProfile& u0, int terms, double tau,
                                        std::span<const double> y) {
  check_1d(u0);
  if (terms < 1 || terms > 20) throw UnsupportedParameter("expansion supports 1..20 terms");
  const auto w = sample_weights(u0);
  const bool half = is_half_line(u0);
  std::vector<double> coeff(terms);
  for (int k = 0; k < terms; ++k) {
    const auto adj = adjoint_polynomial(MultiIndex::scalar(k), 1);
    std::vector<double> t(u0.y.size());
    for (std::size_t i = 0; i < u0.y.size(); ++i) t[i] = w[i] * adj(u0.y[i]) * u0.f[i];
    double c = pairwise_sum(t);
    if (half) c = k % 2 ? 0.0 : 2.0 * c;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    // psi_k = (-1)^k F^{(k)} / sqrt(k!).
    coeff[k] = c * std::exp(-k * tau / 10.0) * (k % 2 ? -1.0 : 1.0) / std::sqrt(fact);
  }
  std::vector<double> out(y.size(), 0.0), d(terms);
  for (std::size_t j = 0; j < y.size(); ++j) {
    kernel_derivatives_1d(y[j], d);
    for (int k = 0; k < terms; ++k) out[j] += coeff[k] * d[k];
  }
  return out;
}

}  // namespace tfe10::spectral
