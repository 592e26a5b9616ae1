#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "tfe10/core/grid.hpp"
#include "tfe10/types.hpp"

/// Linear rescaled operator B = Delta^m + (1/(2m)) y.grad + (N/(2m)) I and its
/// adjoint: fundamental kernel, eigenfunctions, generalized Hermite
/// polynomials and the semigroup expansion of u_t = Delta^5 u.
namespace tfe10::spectral {

inline constexpr int max_derivative = 10;

struct KernelOptions {
  /// Half-order m of the polyharmonic symbol e^{-k^{2m}}.
  int order_m = 5;
  /// Truncation of the Fourier variable on the real axis for m = 5; other
  /// orders truncate where e^{-k^{2m}} < 1e-300.
  double k_max = 2.2;
  /// For y at or beyond this value the 1D integral runs over a steepest-descent
  /// contour through the saddles of i k y - k^{2m}.
  double contour_threshold = 2.0;
  /// Gauss-Legendre panels on [0, k_max] for 1D real-axis quadrature.
  std::size_t real_axis_panels = 32;
  /// Minimum panels for the Hankel integrals; grows with r to follow J(kr).
  std::size_t radial_panels = 16;
  /// Gauss-Legendre panels on each straight segment of the contour.
  std::size_t contour_panels = 40;
};

/// F^{(j)}(y), j = 0..J-1, of the 1D kernel F(y) = (1/pi) int_0^inf cos(ky) e^{-k^{2m}} dk.
void kernel_derivatives_1d(double y, std::span<double> out, const KernelOptions& options = {});
double kernel_derivative_1d(int j, double y, const KernelOptions& options = {});

/// Radial kernel quantities in R^N at r = |y|.
struct RadialValues {
  double F = 0.0;
  double dF = 0.0;       ///< dF/dr
  double d2F = 0.0;      ///< d^2F/dr^2
  double lap4 = 0.0;     ///< Delta^4 F
  double d_lap4 = 0.0;   ///< d/dr Delta^4 F
  double d2_lap4 = 0.0;  ///< d^2/dr^2 Delta^4 F
  double lap5 = 0.0;     ///< Delta^5 F
};
RadialValues radial_kernel_values(int dimension, double r, const KernelOptions& options = {});

/// Rescaled fundamental kernel sampled on a grid.
class Kernel {
 public:
  /// Samples F and its derivatives. 1D grids may extend to negative y.
  Kernel(int dimension, Grid grid, KernelOptions options = {});

  int dimension() const { return dimension_; }
  int order_m() const { return options_.order_m; }
  const Grid& grid() const { return grid_; }
  const KernelOptions& options() const { return options_; }

  /// 1D: F^{(j)} for j = 0..10. Radial: j in {0, 1, 2} radial derivatives.
  std::span<const double> derivative(int j) const;
  /// Radial derivatives (j = 0, 1, 2) of Delta^4 F. In 1D these are F^{(8+j)}.
  std::span<const double> laplacian4(int j) const;
  std::span<const double> values() const { return derivative(0); }
  /// Delta^5 F (equal to F^{(10)} in 1D).
  std::span<const double> laplacian5() const { return lap5_; }

  /// Decay constant of the envelope D e^{-d |y|^{2m/(2m-1)}} from the saddle analysis.
  double decay_constant() const { return decay_; }
  /// Weight exponent a of rho = e^{a |y|^{10/9}}; fixed to d.
  double weight_exponent() const { return decay_; }

  /// Grid indices where the quadrature value did not settle (flagged, not thrown).
  const std::vector<std::size_t>& flagged_points() const { return flagged_; }

 private:
  int dimension_;
  Grid grid_;
  KernelOptions options_;
  std::vector<std::vector<double>> table_;
  std::vector<std::vector<double>> lap4_;
  std::vector<double> lap5_;
  std::vector<std::size_t> flagged_;
  double decay_;
};

/// 1D kernel on a grid covering [0, y_max] (y_max >= 10) or any symmetric range.
Kernel kernel_1d(const Grid& grid, const KernelOptions& options = {});

/// Radial kernel for N in {1, 2, 3}; N = 1 reproduces kernel_1d.
Kernel kernel_radial(int dimension, const Grid& grid, const KernelOptions& options = {});

/// Mass of the kernel over R^N by radial quadrature (independent of the kernel's grid).
double kernel_mass(int dimension, const KernelOptions& options = {}, double r_max = 200.0);

/// Max relative residual of B F = 0 over grid points with |y| in [y_lo, y_hi].
double kernel_equation_residual(const Kernel& kernel, double y_lo = 0.0, double y_hi = 15.0);

/// d = (2m-1)/(2m) (1/(2m))^{1/(2m-1)} cos(pi (m-1)/(2m-1)); for m = 5 the root
/// of a^9 = -(1/10)(9/10)^9 with maximal negative real part.
double decay_constant_formula(int order_m = 5);

/// lambda_beta = -|beta|/10.
double eigenvalue_linear(int k);

/// psi_beta = (-1)^{|beta|}/sqrt(beta!) D^beta F on the kernel grid.
/// 1D: any k <= 9. N = 2: beta in {0, (1,0), (0,1)} (radial part returned with
/// the angular factor recorded in angular_mode).
RadialProfile eigenfunction(const MultiIndex& beta, const Kernel& kernel);

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  struct Term {
    std::vector<int> exponents;
    long double numerator = 0;    ///< integer valued
    long double denominator = 1;  ///< integer valued
    double coefficient() const { return static_cast<double>(numerator / denominator); }
  };

  Polynomial(int dimension, std::vector<Term> terms, double normalization);

  int dimension() const { return dimension_; }
  const std::vector<Term>& terms() const { return terms_; }
  /// Common factor 1/sqrt(beta!).
  double normalization() const { return normalization_; }
  int degree() const;
  double operator()(std::span<const double> y) const;
  double operator()(double y) const;  ///< 1D convenience
  /// Coefficient of the monomial with the given exponents (normalization included).
  double coefficient(const std::vector<int>& exponents) const;

 private:
  int dimension_;
  std::vector<Term> terms_;
  double normalization_;
};

/// psi*_beta = (1/sqrt(beta!)) [ y^beta + sum_{j>=1} ((-1)^j/j!) Delta^{m j} y^beta ],
/// i.e. e^{-Delta^m} y^beta. The alternating sign is what makes B* psi* = -(|beta|/2m) psi*
/// and <psi_0, psi*_beta> = 0 hold once |beta| >= 2m.
Polynomial adjoint_polynomial(const MultiIndex& beta, int dimension, int order_m = 5);

/// Entry (j, k) = <psi_k, psi*_j> in 1D for j, k <= kmax <= 8.
/// Throws InsufficientDomainError if the grid's tail contribution exceeds 1e-8.
std::vector<std::vector<double>> biorthogonality_matrix(int kmax, const Kernel& kernel);

struct EnvelopeFit {
  double d_fit = 0.0;
  double d_formula = 0.0;
  double prefactor_D = 0.0;
  double r_squared = 0.0;
  std::size_t extrema = 0;
};

struct DecayRate {
  double d_fit = 0.0;
  double d_formula = 0.0;
  std::size_t extrema = 0;
  double r_squared = 0.0;
  /// Fit quality for each trial exponent p of |y|^p.
  std::map<double, double> r_squared_by_exponent;
};

/// Local maxima of |f| refined by three-point parabolas, over y >= y_min.
std::vector<std::array<double, 2>> envelope_extrema(std::span<const double> y,
                                                    std::span<const double> f,
                                                    double y_min = 0.0);

/// Regress ln|envelope| + (algebraic_power) ln y against y^p.
EnvelopeFit fit_envelope(const std::vector<std::array<double, 2>>& extrema, double exponent_p,
                         double algebraic_power);

/// Fits d from the oscillation envelope of F; compares to the closed-form root.
DecayRate decay_rate(const Kernel& kernel, double y_min = 5.0);

/// M_k = (1/sqrt(k!)) int z^k u0(z) dz, 1D, k = 0..kmax.
std::map<int, double> moments(const RadialProfile& u0, int kmax);

/// Solution of u_t = Delta^5 u at time t (1D), sampled at `x`.
RadialProfile evolve_linear(const RadialProfile& u0, double t, std::span<const double> x);

/// Rescaled solution w(y, tau) = t^{1/10} u(y t^{1/10}, t), t = e^tau, sampled at y.
/// The datum u0 is the state at t = 1 (tau = 0), so w(., 0) = u0 and psi_0 is a
/// fixed point. Profiles starting at y >= 0 are read as even functions.
std::vector<double> rescaled_solution(const RadialProfile& u0, double tau,
                                      std::span<const double> y);

struct ConvergenceTable {
  std::vector<double> tau;
  std::vector<double> error;  ///< ||w(., tau) - M0 psi0||_{L2}, by Parseval
  double rate = 0.0;          ///< -slope of ln(error) against tau
  bool short_range = false;   ///< rate * (tau_max - tau_min) < 3
};

ConvergenceTable rescaled_convergence(const RadialProfile& u0, std::span<const double> tau_list);

/// Sum_{k<K} e^{-k tau/10} <u0, psi*_k> psi_k(y) (1D), same time convention.
std::vector<double> truncated_expansion(const RadialProfile& u0, int terms, double tau,
                                        std::span<const double> y);

}  // namespace tfe10::spectral
