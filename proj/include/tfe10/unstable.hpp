#pragma once

#include <string>

#include "tfe10/similarity.hpp"

/// Thin film equation with backward diffusion,
/// u_t = div(|u|^n grad Delta^4 u) - Delta(|u|^{p-1} u): exponents, the
/// critical exponent and the mass-conserving profile at p = p0(n).
namespace tfe10::unstable {

struct UnstableExponents {
  double n = 0.0;
  double p = 0.0;
  int dimension = 1;
  double alpha = 0.0;  ///< 4/(5p - (n + 5))
  double beta = 0.0;   ///< (1 - n alpha)/10
  double p0 = 0.0;     ///< n + 1 + 8/N
  /// alpha n + 10 beta - 1 and alpha (p - 1) + 2 beta - 1.
  double balance_mobility = 0.0;
  double balance_diffusion = 0.0;
  /// The sign-flipped forms 10 beta - n alpha - 1 and 2 beta - alpha (p - 1) - 1.
  double printed_mobility = 0.0;
  double printed_diffusion = 0.0;
  bool identities_ok = false;
};

/// Requires p > n + 1, n >= 0 and 5p != n + 5.
UnstableExponents exponents_unstable(double n, double p, int N = 1);

double p_critical(double n, int N);

/// -k^10 + k^2.
double unstable_symbol(double k);

struct SymbolBand {
  double lower = 0.0;  ///< 0
  double upper = 1.0;  ///< 1
  double argmax = 0.0;  ///< (1/5)^{1/8}
  double max_value = 0.0;
};

SymbolBand unstable_band();

struct UnstableOptions {
  similarity::F0Options f0;
  /// First nonzero flux coefficient kappa of the homotopy and its growth factor.
  double start_weight = 1e-6;
  double weight_growth = 10.0;
  /// Regularization used along the kappa path; afterwards delta is lowered to
  /// the requested value at kappa = 1.
  double homotopy_delta = 1e-6;
};

struct UnstableProfile {
  UnstableExponents exponents;
  similarity::NonlinearEigenfunction profile;
  /// Flux coefficients kappa visited by the homotopy from the thin film profile.
  std::vector<double> path;
  /// Regularizations visited after kappa reached 1.
  std::vector<double> delta_path;
  std::string message;
};

/// Shooting for the once-integrated equation
/// |f|^n (Delta^4 f)' - (|f|^{p-1} f)' + beta r f = 0 at p = p0(n), seeded
/// by the thin film profile with the same f(0) and continued in kappa from 0 to 1
/// (the flux term kappa (|f|^{p-1} f)'), then in delta down to the requested
/// regularization. Non-convergence is reported, not thrown.
UnstableProfile solve_f0_unstable(double n, int N, const UnstableOptions& options = {});
UnstableProfile solve_f0_unstable(double n, int N, double p, const UnstableOptions& options = {});

std::string to_json(const UnstableExponents& e);
std::string to_json(const UnstableProfile& p);

}  // namespace tfe10::unstable
