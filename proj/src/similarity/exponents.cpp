#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tfe10/core/grid.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/similarity.hpp"

namespace tfe10::similarity {

namespace {

void check_dimension(int N) {
  if (N < 1) throw InvalidArgument("dimension must be >= 1");
}

double sphere_area(int N) {
  // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

}  // namespace

SimilarityExponents alpha0(double n, int N) {
  check_dimension(N);
  const double den = 10.0 + N * n;
  if (!(den > 0.0)) throw InvalidArgument("alpha0 needs 10 + N n > 0");
  return {N / den, 1.0 / den, n, N};
}

double alpha_k_linear(int k, int N) {
  check_dimension(N);
  if (k < 0) throw InvalidArgument("eigen index must be >= 0");
  return (k + N) / 10.0;
}

AsymptoticBundle asymptotic_bundle(double alpha, int N) {
  check_dimension(N);
  if (!(alpha > 0.0)) throw InvalidArgument("asymptotic bundle needs alpha > 0");
  AsymptoticBundle b;
  b.alpha = alpha;
  b.dimension = N;
  b.amplitude_exponent = -4.0 * N / 9.0;
  for (int m : {0, 1, -1, 2, -2}) b.omegas.push_back(std::polar(1.0, 2.0 * m * std::numbers::pi / 9.0));
  b.slowest = {b.omegas[3], b.omegas[4]};
  b.decay_constant = 0.9 * std::pow(alpha, 1.0 / 9.0) * std::cos(4.0 * std::numbers::pi / 9.0);
  return b;
}

double default_delta(double n) { return std::min(1e-10, 1e-8 * n); }

double mass(const RadialProfile& profile) {
  const auto& y = profile.y;
  if (y.size() < 2 || profile.f.size() != y.size()) throw InvalidArgument("mass needs a sampled profile");
  std::vector<double> w = profile.weights;
  if (w.empty()) {
    w.assign(y.size(), 0.0);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
      w[i] += 0.5 * (y[i + 1] - y[i]);
      w[i + 1] += 0.5 * (y[i + 1] - y[i]);
    }
  }
  const int N = profile.dimension;
  std::vector<double> terms(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) terms[i] = w[i] * profile.f[i] * std::pow(y[i], N - 1);
  const double s = pairwise_sum(terms);
  // Symmetric 1D profiles sampled on y >= 0 cover half of the line.
  if (N == 1 && y.front() >= 0.0) return 2.0 * s;
  return N == 1 ? s : sphere_area(N) * s;
}

bool check_mass_conservation(const RadialProfile& profile, const SimilarityExponents& e) {
  (void)profile;
  return std::abs(e.alpha - e.beta * e.dimension) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                                        std::max(1.0, std::abs(e.alpha));
}

int count_sign_changes(const RadialProfile& profile, double deadband, double y_from, double y_to) {
  int last = 0, count = 0;
  for (std::size_t i = 0; i < profile.y.size(); ++i) {
    if (profile.y[i] < y_from || profile.y[i] > y_to) continue;
    const double v = profile.f[i];
    if (std::abs(v) <= deadband) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace tfe10::similarity
