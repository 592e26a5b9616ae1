#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "tfe10/errors.hpp"
#include "tfe10/spectral.hpp"

namespace tfe10 {

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("multi-index needs at least one component");
  for (int c : components_)
    if (c < 0) throw InvalidArgument("multi-index components must be nonnegative");
}

int MultiIndex::order() const { return std::accumulate(components_.begin(), components_.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int c : components_)
    for (int i = 2; i <= c; ++i) f *= i;
  return f;
}

double MultiIndex::weight() const { return std::sqrt(factorial()); }

std::string MultiIndex::to_string() const {
  std::ostringstream s;
  s << '(';
  for (std::size_t i = 0; i < components_.size(); ++i) s << (i ? "," : "") << components_[i];
  s << ')';
  return s.str();
}

}  // namespace tfe10

namespace tfe10::spectral {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

double sqrt_factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return std::sqrt(f);
}

}  // namespace

double eigenvalue_linear(int k) {
  if (k < 0) throw InvalidArgument("eigenvalue index must be nonnegative");
  return -static_cast<double>(k) / 10.0;
}

RadialProfile eigenfunction(const MultiIndex& beta, const Kernel& kernel) {
  const int order = beta.order();
  RadialProfile p;
  p.dimension = kernel.dimension();
  const auto pts = kernel.grid().points();
  p.y.assign(pts.begin(), pts.end());
  const auto w = kernel.grid().weights();
  p.weights.assign(w.begin(), w.end());

  if (kernel.dimension() == 1) {
    if (beta.dimension() != 1) throw InvalidArgument("1D kernel needs a scalar multi-index");
    if (order > 9)
      throw UnsupportedParameter("eigenfunction order " + std::to_string(order) +
                                 " exceeds the derivative table (<= 9)");
    const double s = (order % 2 ? -1.0 : 1.0) / beta.weight();
    auto scaled = [&](int j) {
      const auto d = kernel.derivative(j);
      std::vector<double> v(d.begin(), d.end());
      for (double& x : v) x *= s;
      return v;
    };
    p.f = scaled(order);
    for (int j = order + 1; j <= max_derivative; ++j) p.derivatives.push_back(scaled(j));
    return p;
  }

  if (beta.dimension() != static_cast<std::size_t>(kernel.dimension()))
    throw InvalidArgument("multi-index dimension does not match the kernel");
  if (order == 0) {
    const auto F = kernel.values();
    p.f.assign(F.begin(), F.end());
    for (int j = 1; j <= 2; ++j) {
      const auto d = kernel.derivative(j);
      p.derivatives.emplace_back(d.begin(), d.end());
    }
    return p;
  }
  // Dipoles: -d_i F = -F'(r) y_i / r; only the first two coordinate directions.
  const auto& c = beta.components();
  const bool e1 = c[0] == 1 && order == 1;
  const bool e2 = c.size() > 1 && c[1] == 1 && order == 1;
  if (!e1 && !e2)
    throw UnsupportedParameter("radial eigenfunctions are implemented for |beta| <= 1 only");
  p.angular_mode = e1 ? 1 : 2;
  const auto d1 = kernel.derivative(1);
  const auto d2 = kernel.derivative(2);
  p.f.resize(d1.size());
  std::vector<double> dr(d2.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    p.f[i] = -d1[i];
    dr[i] = -d2[i];
  }
  p.derivatives.push_back(std::move(dr));
  return p;
}

Polynomial::Polynomial(int dimension, std::vector<Term> terms, double normalization)
    : dimension_(dimension), terms_(std::move(terms)), normalization_(normalization) {}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_)
    if (t.numerator != 0) d = std::max(d, std::accumulate(t.exponents.begin(), t.exponents.end(), 0));
  return d;
}

double Polynomial::operator()(std::span<const double> y) const {
  if (y.size() != static_cast<std::size_t>(dimension_))
    throw InvalidArgument("polynomial evaluated at a point of the wrong dimension");
  long double s = 0.0L;
  for (const auto& t : terms_) {
    long double v = t.numerator / t.denominator;
    for (int i = 0; i < dimension_; ++i) v *= std::pow(static_cast<long double>(y[i]), t.exponents[i]);
    s += v;
  }
  return static_cast<double>(s) * normalization_;
}

double Polynomial::operator()(double y) const {
  const double a[1] = {y};
  return (*this)(std::span<const double>(a, 1));
}

double Polynomial::coefficient(const std::vector<int>& exponents) const {
  for (const auto& t : terms_)
    if (t.exponents == exponents) return t.coefficient() * normalization_;
  return 0.0;
}

Polynomial adjoint_polynomial(const MultiIndex& beta, int dimension, int order_m) {
  if (beta.dimension() != static_cast<std::size_t>(dimension))
    throw InvalidArgument("multi-index dimension does not match N");
  if (beta.order() > 20) throw UnsupportedParameter("adjoint polynomials need |beta| <= 20");
  if (order_m < 1) throw InvalidArgument("order m must be positive");

  // Integer-coefficient polynomial, exponent vector -> coefficient.
  using Poly = std::map<std::vector<int>, i128>;
  auto laplacian = [&](const Poly& p) {
    Poly out;
    for (const auto& [e, c] : p)
      for (int i = 0; i < dimension; ++i)
        if (e[i] >= 2) {
          auto f = e;
          f[i] -= 2;
          out[f] += c * e[i] * (e[i] - 1);
        }
    return out;
  };

  Poly current{{beta.components(), 1}};
  std::map<std::vector<int>, std::pair<i128, i128>> sum;  // numerator, denominator
  sum[beta.components()] = {1, 1};
  i128 jfact = 1;
  for (int j = 1; 2 * order_m * j <= beta.order(); ++j) {
    jfact *= j;
    for (int r = 0; r < order_m; ++r) current = laplacian(current);
    for (const auto& [e, c] : current) {
      if (c == 0) continue;
      auto& [num, den] = sum.try_emplace(e, i128{0}, i128{1}).first->second;
      // num/den + (-1)^j c/jfact
      num = num * jfact + (j % 2 ? -c : c) * den;
      den = den * jfact;
      const i128 g = gcd128(num, den);
      if (g > 1) {
        num /= g;
        den /= g;
      }
    }
  }

  std::vector<Polynomial::Term> terms;
  for (const auto& [e, nd] : sum) {
    if (nd.first == 0) continue;
    terms.push_back({e, static_cast<long double>(nd.first), static_cast<long double>(nd.second)});
  }
  // Highest degree first.
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return std::accumulate(a.exponents.begin(), a.exponents.end(), 0) >
           std::accumulate(b.exponents.begin(), b.exponents.end(), 0);
  });
  return Polynomial(dimension, std::move(terms), 1.0 / beta.weight());
}

std::vector<std::vector<double>> biorthogonality_matrix(int kmax, const Kernel& kernel) {
  if (kernel.dimension() != 1) throw UnsupportedParameter("biorthogonality matrix is 1D only");
  if (kmax < 0 || kmax > 8) throw UnsupportedParameter("biorthogonality matrix needs kmax <= 8");
  const auto y = kernel.grid().points();
  const auto w = kernel.grid().weights();
  const bool half_line = kernel.grid().front() >= 0.0;
  const double Y = std::max(std::abs(kernel.grid().front()), std::abs(kernel.grid().back()));
  const double d = kernel.decay_constant();
  const std::size_t tail_start = y.size() - std::max<std::size_t>(y.size() / 20, 1);

  std::vector<Polynomial> adj;
  for (int j = 0; j <= kmax; ++j) adj.push_back(adjoint_polynomial(MultiIndex::scalar(j), 1));

  std::vector<std::vector<double>> M(kmax + 1, std::vector<double>(kmax + 1, 0.0));
  for (int k = 0; k <= kmax; ++k) {
    const auto Fk = kernel.derivative(k);
    const double s = (k % 2 ? -1.0 : 1.0) / sqrt_factorial(k);
    for (int j = 0; j <= kmax; ++j) {
      if (half_line && (j + k) % 2 == 1) continue;  // odd integrand
      std::vector<double> terms(y.size());
      double tail = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        terms[i] = w[i] * s * Fk[i] * adj[j](y[i]);
        if (i >= tail_start) tail = std::max(tail, std::abs(s * Fk[i] * adj[j](y[i])));
      }
      const double rate = (10.0 / 9.0) * d * std::pow(Y, 1.0 / 9.0) - j / Y;
      const double tail_estimate = 2.0 * tail / std::max(rate, 1e-3);
      if (tail_estimate > 1e-8) {
        std::ostringstream msg;
        msg << "grid ends at |y| = " << Y << "; estimated tail of <psi_" << k << ", psi*_" << j
            << "> is " << tail_estimate << " (> 1e-8)";
        throw InsufficientDomainError(msg.str());
      }
      M[j][k] = pairwise_sum(terms) * (half_line ? 2.0 : 1.0);
    }
  }
  return M;
}

std::vector<std::array<double, 2>> envelope_extrema(std::span<const double> y,
                                                    std::span<const double> f, double y_min) {
  std::vector<std::array<double, 2>> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < y_min) continue;
    const double a = std::abs(f[i - 1]), b = std::abs(f[i]), c = std::abs(f[i + 1]);
    if (!(b >= a && b > c) || b == 0.0) continue;
    // Parabola through the three samples (nonuniform spacing allowed).
    const double x0 = y[i - 1], x1 = y[i], x2 = y[i + 1];
    const double d1 = (b - a) / (x1 - x0), d2 = (c - b) / (x2 - x1);
    const double curv = (d2 - d1) / (x2 - x0);
    double xv = x1, fv = b;
    if (curv < 0.0) {
      xv = 0.5 * (x0 + x1) - d1 / (2.0 * curv);
      xv = std::clamp(xv, x0, x2);
      fv = a + d1 * (xv - x0) + curv * (xv - x0) * (xv - x1);
      if (fv < b) fv = b, xv = x1;
    }
    out.push_back({xv, fv});
  }
  return out;
}

EnvelopeFit fit_envelope(const std::vector<std::array<double, 2>>& extrema, double exponent_p,
                         double algebraic_power) {
  if (extrema.size() < 5)
    throw InsufficientTailError("need at least 5 envelope extrema, found " +
                                std::to_string(extrema.size()));
  const double n = static_cast<double>(extrema.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (const auto& e : extrema) {
    const double x = std::pow(e[0], exponent_p);
    const double v = std::log(e[1]) + algebraic_power * std::log(e[0]);
    xs.push_back(x);
    ys.push_back(v);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ss_res += std::pow(ys[i] - (icpt + slope * xs[i]), 2);
    ss_tot += std::pow(ys[i] - mean, 2);
  }
  EnvelopeFit fit;
  fit.d_fit = -slope;
  fit.prefactor_D = std::exp(icpt);
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.extrema = extrema.size();
  return fit;
}

DecayRate decay_rate(const Kernel& kernel, double y_min) {
  const auto y = kernel.grid().points();
  const auto F = kernel.values();
  const auto ext = envelope_extrema(y, F, std::max(y_min, 1e-12));
  const double m = kernel.order_m();
  const double p = 2.0 * m / (2.0 * m - 1.0);
  // Algebraic prefactor |y|^{-2N(m-1)/(2(2m-1))} of the saddle-point asymptotics (4N/9 at m = 5).
  const double alg = kernel.dimension() * (m - 1.0) / (2.0 * m - 1.0);

  DecayRate out;
  out.d_formula = decay_constant_formula(kernel.order_m());
  const auto main = fit_envelope(ext, p, alg);
  out.d_fit = main.d_fit;
  out.r_squared = main.r_squared;
  out.extrema = main.extrema;
  for (double q : {1.0, p, 1.25}) out.r_squared_by_exponent[q] = fit_envelope(ext, q, alg).r_squared;
  return out;
}

}  // namespace tfe10::spectral
