#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "tfe10/core/grid.hpp"
#include "tfe10/odeshoot.hpp"
#include "tfe10/types.hpp"

/// Self-similar exponents, the first nonlinear eigenfunction f0 with its free
/// boundary, the linear family f_k at n = 0 and the far-field bundle.
namespace tfe10::similarity {

/// u = t^{-alpha} f(x / t^beta); always 10 beta + n alpha = 1.
struct SimilarityExponents {
  double alpha = 0.0;
  double beta = 0.0;
  double n = 0.0;
  int dimension = 1;
};

/// Mass-conserving exponents alpha = N/(10+Nn), beta = 1/(10+Nn).
SimilarityExponents alpha0(double n, int N);
/// (k + N)/10.
double alpha_k_linear(int k, int N);

struct AsymptoticBundle {
  double alpha = 0.0;
  int dimension = 1;
  /// Ninth roots of unity with Re > 0, ordered by decreasing real part.
  std::vector<std::complex<double>> omegas;
  double amplitude_exponent = 0.0;  ///< -4N/9
  /// (9/10) alpha^{1/9} cos(4 pi/9): decay rate of the slowest pair.
  double decay_constant = 0.0;
  std::array<std::complex<double>, 2> slowest{};
};

AsymptoticBundle asymptotic_bundle(double alpha, int N = 1);

/// Coefficient of the r f term in the once-integrated equation.
enum class DriftCoefficient {
  beta0,   ///< 1/(10+Nn), from the divergence form
  alpha0,  ///< N/(10+Nn), as printed; equal to beta0 in 1D
};

struct F0Options {
  double normalization = 1.0;  ///< f(0)
  std::optional<double> delta;  ///< default_delta(n) when empty
  DriftCoefficient drift = DriftCoefficient::beta0;
  /// Interface guess at the seed; 0.97 x the third zero of F when empty.
  std::optional<double> y0_guess;
  /// Seed value of n; larger n are reached by natural continuation.
  double n_start = 1e-3;
  double max_step = 0.05;
  std::size_t profile_points = 4001;
  /// Samples for the interior residual check (finer than the stored profile).
  std::size_t check_points = 16001;
  odeshoot::ShootOptions shoot = default_shoot_options();

  static odeshoot::ShootOptions default_shoot_options();
};

struct NonlinearEigenfunction {
  int k = 0;
  double n = 0.0;
  int dimension = 1;
  double alpha = 0.0;
  double beta = 0.0;
  double normalization = 1.0;
  double delta = 0.0;
  RadialProfile profile;
  std::optional<double> y0;
  bool converged = false;
  /// Shooting unknowns (Delta f(0), ..., Delta^4 f(0), y0); empty for f_k.
  std::vector<double> unknowns;
  std::vector<double> residuals;
  double residual_norm = 0.0;
  /// Relative residual of the governing equation on the samples.
  double interior_residual = 0.0;
  int iterations = 0;
  std::string message;
  /// Fitted tail decay constant (f_k only, when enough extrema are present).
  std::optional<double> tail_decay_fit;
};

/// min(1e-10, 1e-8 n).
double default_delta(double n);

/// Shooting problem for the once-integrated ninth-order equation with origin
/// state (c, 0, Delta f(0), 0, ..., Delta^4 f(0)) and the five conditions
/// f = f' = Delta f = (Delta f)' = Delta^2 f = 0 at the free boundary.
odeshoot::ShootingSpec f0_spec(double n, int N, const F0Options& options = {},
                               odeshoot::RadialModel model = odeshoot::RadialModel::thin_film,
                               double p = 1.0);

/// Delta^j F(0) / F(0), j = 1..4, followed by the y0 guess.
std::vector<double> f0_kernel_guess(int N, std::optional<double> y0 = std::nullopt);
/// j-th positive zero of the radial kernel (j >= 1).
double kernel_zero(int N, int j);

/// One corrector solve from the given unknowns, no continuation.
NonlinearEigenfunction solve_f0_from(double n, int N, const std::vector<double>& guess,
                                     const F0Options& options = {});
/// Kernel-seeded solve at n_start followed by continuation to n.
NonlinearEigenfunction solve_f0(double n, int N, const F0Options& options = {});

/// Uniform samples of a shooting solution with Simpson weights.
RadialProfile sample_profile(const odeshoot::ShootingSpec& spec, const std::vector<double>& unknowns,
                             std::size_t points,
                             const odeshoot::IntegratorOptions& options =
                                 F0Options::default_shoot_options().integrator);
/// max |mob(f) (Delta^4 f)' - flux + c r f| / max |c r f| over samples with
/// |f| > 10 delta, (Delta^4 f)' by sixth-order differences. Stencils that
/// straddle a zero of f are skipped.
double f0_interior_residual(const odeshoot::ShootingSpec& spec, const RadialProfile& profile);

/// Strict sign alternations of f on [y_from, y_to] ignoring |f| <= deadband.
int count_sign_changes(const RadialProfile& profile, double deadband, double y_from = 0.0,
                       double y_to = 1e300);

/// Surface-measure weighted integral of f.
double mass(const RadialProfile& profile);
/// alpha == beta N.
bool check_mass_conservation(const RadialProfile& profile, const SimilarityExponents& exponents);

/// sup |f/M - F| over y <= fraction * y0, M the mass of f.
double kernel_distance(const NonlinearEigenfunction& f0, double fraction = 0.8);

/// f_k at n = 0 from (-1)^k F^{(k)}: f_k(0) = 1 for even k, f_k'(0) = 1 for odd k.
NonlinearEigenfunction solve_fk_linear(int k, int N, const Grid& grid);

std::string to_json(const NonlinearEigenfunction& f);

}  // namespace tfe10::similarity
