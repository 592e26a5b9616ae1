#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "tfe10/core/quadrature.hpp"
#include "tfe10/core/special_functions.hpp"
#include "tfe10/errors.hpp"
#include "tfe10/spectral.hpp"

namespace tfe10::spectral {

namespace {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

double truncation_point(const KernelOptions& o) {
  if (o.order_m == 5) return o.k_max;
  return std::pow(700.0, 1.0 / (2.0 * o.order_m));
}

void check_order(int m) {
  if (m < 1 || m > 12) throw UnsupportedParameter("kernel order m must lie in [1, 12]");
}

// e^{-k^{2m}} for complex k.
cplx symbol(cplx k, int m) {
  cplx p = k * k;
  cplx q = 1.0;
  for (int i = 0; i < m; ++i) q *= p;
  return std::exp(-q);
}

// Accumulates int_a^b (ik)^j e^{iky - k^{2m}} dk along a straight segment.
void segment(cplx a, cplx b, double y, int m, std::size_t panels, std::span<cplx> acc) {
  const auto& gl = gauss_legendre(16);
  const cplx len = b - a;
  const cplx h = len / static_cast<double>(panels);
  const cplx I(0.0, 1.0);
  for (std::size_t p = 0; p < panels; ++p) {
    const cplx mid = a + h * (static_cast<double>(p) + 0.5);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const cplx k = mid + 0.5 * h * gl.nodes[q];
      const cplx w = 0.5 * h * gl.weights[q] * std::exp(I * k * y) * symbol(k, m);
      cplx pw = 1.0;
      const cplx ik = I * k;
      for (std::size_t j = 0; j < acc.size(); ++j) {
        acc[j] += pw * w;
        pw *= ik;
      }
    }
  }
}

void real_axis_1d(double y, std::span<double> out, const KernelOptions& o, std::size_t panels) {
  std::vector<cplx> acc(out.size(), 0.0);
  segment(0.0, truncation_point(o), y, o.order_m, panels, acc);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = acc[j].real() / pi;
}

// Steepest-descent contour through the saddles s = R e^{i theta} of
// i k y - k^{2m}, R = (y/(2m))^{1/(2m-1)}, theta = (pi/2 + 2 pi l)/(2m-1).
// The piece on the imaginary axis contributes a purely imaginary value and
// is dropped; the path starts at iR.
void contour_1d(double y, std::span<double> out, const KernelOptions& o, std::size_t panels) {
  const int m = o.order_m;
  const double q = 2.0 * m - 1.0;
  const double R = std::pow(y / (2.0 * m), 1.0 / q);
  const double theta0 = pi / (2.0 * q);
  std::vector<cplx> path{cplx(0.0, R)};
  for (int l = static_cast<int>(std::floor((q - 1.0) / 4.0)); l >= 0; --l) {
    const double th = theta0 + 2.0 * pi * l / q;
    if (th < pi / 2.0 - 1e-12) path.push_back(std::polar(R, th));
  }
  const cplx s0 = path.back();
  const double kt = truncation_point(o);
  if (m == 1) {
    path.push_back(s0 + kt);
  } else {
    const double descent = -(m - 1) * theta0;
    const double t = s0.imag() / std::sin(-descent);
    const cplx hit = s0 + std::polar(t, descent);
    path.push_back(cplx(hit.real(), 0.0));
    path.push_back(cplx(std::max(hit.real(), 0.0) + kt, 0.0));
  }
  std::vector<cplx> acc(out.size(), 0.0);
  for (std::size_t s = 0; s + 1 < path.size(); ++s) segment(path[s], path[s + 1], y, m, panels, acc);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = acc[j].real() / pi;
}

void evaluate_1d(double y, std::span<double> out, const KernelOptions& o, bool coarse = false) {
  check_order(o.order_m);
  if (!std::isfinite(y)) throw EvaluationError("kernel evaluated at non-finite y");
  const double a = std::abs(y);
  if (a < o.contour_threshold) {
    real_axis_1d(a, out, o, coarse ? o.real_axis_panels / 2 : o.real_axis_panels);
  } else {
    contour_1d(a, out, o, coarse ? o.contour_panels / 2 : o.contour_panels);
  }
  if (y < 0.0)
    for (std::size_t j = 1; j < out.size(); j += 2) out[j] = -out[j];
}

}  // namespace

void kernel_derivatives_1d(double y, std::span<double> out, const KernelOptions& options) {
  evaluate_1d(y, out, options);
}

double kernel_derivative_1d(int j, double y, const KernelOptions& options) {
  if (j < 0 || j > 40) throw UnsupportedParameter("derivative order out of range");
  std::vector<double> v(j + 1);
  evaluate_1d(y, v, options);
  return v[j];
}

RadialValues radial_kernel_values(int dimension, double r, const KernelOptions& o) {
  if (dimension < 1 || dimension > 3)
    throw UnsupportedParameter("radial kernel supports N in {1, 2, 3}, got " +
                               std::to_string(dimension));
  check_order(o.order_m);
  if (!(r >= 0.0) || !std::isfinite(r)) throw EvaluationError("radial kernel needs finite r >= 0");
  const double nu = 0.5 * dimension - 1.0;
  const double kt = truncation_point(o);
  const auto panels =
      std::max(o.radial_panels, static_cast<std::size_t>(std::ceil(kt * r / 12.0)));
  const auto& gl = gauss_legendre(16);
  const double h = kt / static_cast<double>(panels);
  const double c = std::pow(2.0 * pi, -0.5 * dimension);

  // I[a][b] = int k^{N/2 + a} g(k) S_{nu+b}(k, r) dk with S_mu = r^{-mu} J_mu(k r).
  double I0[12] = {}, I1[12] = {};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = h * (static_cast<double>(p) + 0.5);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double k = mid + 0.5 * h * gl.nodes[q];
      const double w = 0.5 * h * gl.weights[q] * std::pow(k, 0.5 * dimension) *
                       std::exp(-std::pow(k, 2.0 * o.order_m));
      const double s0 = bessel_j_scaled(nu, k, r);
      const double s1 = bessel_j_scaled(nu + 1.0, k, r);
      double pw = w;
      for (int a = 0; a < 12; ++a) {
        I0[a] += pw * s0;
        I1[a] += pw * s1;
        pw *= k;
      }
    }
  }
  // r^{-nu} J_{nu+1}(kr) = r S_{nu+1}.
  RadialValues v;
  v.F = c * I0[0];
  v.dF = -c * r * I1[1];
  v.d2F = -c * (I0[2] - (2.0 * nu + 1.0) * I1[1]);
  v.lap4 = c * I0[8];
  v.d_lap4 = -c * r * I1[9];
  v.d2_lap4 = -c * (I0[10] - (2.0 * nu + 1.0) * I1[9]);
  v.lap5 = -c * I0[10];
  return v;
}

double decay_constant_formula(int order_m) {
  check_order(order_m);
  const double m = order_m, q = 2.0 * m - 1.0;
  return q / (2.0 * m) * std::pow(1.0 / (2.0 * m), 1.0 / q) * std::cos(pi * (m - 1.0) / q);
}

Kernel::Kernel(int dimension, Grid grid, KernelOptions options)
    : dimension_(dimension), grid_(std::move(grid)), options_(options) {
  check_order(options_.order_m);
  if (dimension_ < 1 || dimension_ > 3)
    throw UnsupportedParameter("kernel supports N in {1, 2, 3}, got " + std::to_string(dimension_));
  decay_ = decay_constant_formula(options_.order_m);
  const std::size_t n = grid_.size();

  if (dimension_ == 1) {
    table_.assign(max_derivative + 1, std::vector<double>(n));
    std::vector<double> v(max_derivative + 1), vc(1);
    for (std::size_t i = 0; i < n; ++i) {
      evaluate_1d(grid_[i], v, options_);
      for (int j = 0; j <= max_derivative; ++j) table_[j][i] = v[j];
      evaluate_1d(grid_[i], vc, options_, true);
      const double diff = std::abs(vc[0] - v[0]);
      if (!std::isfinite(v[0]) || diff > 1e-8 * std::abs(v[0]) + 1e-18) flagged_.push_back(i);
    }
    for (int j = 8; j <= 10; ++j) lap4_.push_back(table_[j]);
    lap5_ = table_[10];
    return;
  }

  if (grid_.front() < 0.0) throw InvalidArgument("radial kernel grid must satisfy r >= 0");
  table_.assign(3, std::vector<double>(n));
  lap4_.assign(3, std::vector<double>(n));
  lap5_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = radial_kernel_values(dimension_, grid_[i], options_);
    table_[0][i] = v.F;
    table_[1][i] = v.dF;
    table_[2][i] = v.d2F;
    lap4_[0][i] = v.lap4;
    lap4_[1][i] = v.d_lap4;
    lap4_[2][i] = v.d2_lap4;
    lap5_[i] = v.lap5;
    if (!std::isfinite(v.F) || !std::isfinite(v.lap5)) flagged_.push_back(i);
  }
}

std::span<const double> Kernel::derivative(int j) const {
  if (j < 0 || j >= static_cast<int>(table_.size()))
    throw UnsupportedParameter("kernel derivative " + std::to_string(j) + " is not tabulated");
  return table_[j];
}

std::span<const double> Kernel::laplacian4(int j) const {
  if (j < 0 || j > 2) throw UnsupportedParameter("laplacian4 derivative must be 0, 1 or 2");
  return lap4_[j];
}

Kernel kernel_1d(const Grid& grid, const KernelOptions& options) {
  if (grid.back() < 10.0) throw InvalidArgument("kernel_1d needs a grid reaching y >= 10");
  return Kernel(1, grid, options);
}

Kernel kernel_radial(int dimension, const Grid& grid, const KernelOptions& options) {
  if (dimension < 1 || dimension > 3)
    throw UnsupportedParameter("kernel_radial supports N in {1, 2, 3}, got " +
                               std::to_string(dimension));
  if (dimension == 1) return Kernel(1, grid, options);
  return Kernel(dimension, grid, options);
}

double kernel_mass(int dimension, const KernelOptions& options, double r_max) {
  const auto rule = QuadratureRule::uniform(0.0, r_max, static_cast<std::size_t>(std::ceil(r_max)));
  if (dimension == 1) {
    std::vector<double> v(1);
    return 2.0 * integrate(
                     [&](double y) {
                       evaluate_1d(y, v, options);
                       return v[0];
                     },
                     rule);
  }
  const double area = dimension == 2 ? 2.0 * pi : 4.0 * pi;
  return area * integrate(
                    [&](double r) {
                      return radial_kernel_values(dimension, r, options).F *
                             std::pow(r, dimension - 1);
                    },
                    rule);
}

double kernel_equation_residual(const Kernel& kernel, double y_lo, double y_hi) {
  const double m = kernel.order_m();
  const int N = kernel.dimension();
  const auto F = kernel.values();
  const auto dF = kernel.derivative(1);
  const auto L = kernel.laplacian5();
  const auto y = kernel.grid().points();
  if (kernel.order_m() != 5 && N > 1)
    throw UnsupportedParameter("radial residual is tabulated for m = 5 only");
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double a = std::abs(y[i]);
    if (a < y_lo || a > y_hi) continue;
    double lead = L[i];
    if (N == 1 && kernel.order_m() != 5) lead = kernel.derivative(2 * kernel.order_m())[i];
    const double res = lead + y[i] * dF[i] / (2.0 * m) + N * F[i] / (2.0 * m);
    worst = std::max(worst, std::abs(res));
    scale = std::max({scale, std::abs(lead), std::abs(y[i] * dF[i] / (2.0 * m)),
                      std::abs(N * F[i] / (2.0 * m))});
  }
  if (scale == 0.0) throw InsufficientDomainError("no grid points in the residual window");
  return worst / scale;
}

}  // namespace tfe10::spectral
