#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfe10/core/conic.hpp"
#include "tfe10/core/quadrature.hpp"
#include "tfe10/spectral.hpp"

/// Lyapunov-Schmidt branching quantities at n = 0: the first-order shift of
/// the simple eigenvalue, the 2D dipole system, and the branch-count engines
/// for the reduced quadratic and conic equations.
namespace tfe10::branching {

/// Expansion alpha_k(n) = alpha_k + mu1 n + o(n) on the eigenspace sum c_beta psi_beta.
struct ExpansionCoefficients {
  int k = 0;
  double mu1 = 0.0;
  std::vector<double> c;  ///< sums to 1
};

/// Piecewise polynomial interpolation of a tabulated radial kernel.
///
/// The kernel grid must be panel-composite Gauss-Legendre (Grid::from_rule);
/// each panel is interpolated through its nodes in barycentric form. Columns
/// F, F', F'' and G, G', G'' with G = Delta^4 F come from the table; third
/// derivatives come from spectral differentiation on each panel.
class RadialTable {
 public:
  explicit RadialTable(const spectral::Kernel& kernel,
                       int nodes_per_panel = QuadratureRule::default_nodes);

  struct Values {
    double F = 0.0, dF = 0.0, d2F = 0.0, d3F = 0.0;
    double G = 0.0, dG = 0.0, d2G = 0.0, d3G = 0.0;
  };

  int dimension() const { return dimension_; }
  double r_min() const { return breaks_.front(); }
  double r_max() const { return breaks_.back(); }
  Values operator()(double r) const;
  double F(double r) const;
  double dF(double r) const;
  /// <psi_0, psi_0^*> = int F over R^N from the table's own weights.
  double mass() const { return mass_; }

 private:
  enum Column { cF, cdF, cd2F, cd3F, cG, cdG, cd2G, cd3G, column_count };
  std::size_t panel_of(double r) const;
  double interpolate(Column c, std::size_t panel, double r) const;

  int dimension_;
  int nodes_;
  std::vector<double> breaks_;
  std::vector<double> reference_;    ///< nodes on [-1, 1]
  std::vector<double> barycentric_;  ///< weights for the reference nodes
  std::array<std::vector<double>, column_count> columns_;
  double mass_ = 0.0;
};

/// Radial Gauss-Legendre kernel on [0, r_max] suitable for RadialTable.
spectral::Kernel branching_kernel(int N, double r_max = 120.0, double panel_width = 0.5);

/// Sign changes of f on [a, b] from samples every `step`, refined by bisection.
std::vector<double> bracket_zeros(const std::function<double(double)>& f, double a, double b,
                                  double step);

// ---------------------------------------------------------------------------
// Simple eigenvalue k = 0.

struct Mu10Options {
  /// Smooth cutoff phi = 1 on r <= inner, 0 on r >= outer; the divergence term
  /// is evaluated in weak form against phi. Zero means 0.5 and 0.9 of the table range.
  double cutoff_inner = 0.0;
  double cutoff_outer = 0.0;
  int levels = 20;           ///< geometric grading steps into each zero of F
  double max_panel = 0.5;
  /// Magnitude of the divergence term above which the grading is deemed unresolved.
  double divergence_tolerance = 1e-3;
};

struct Mu10Result {
  int dimension = 1;
  double divergence_term = 0.0;  ///< <-div(ln|psi0| grad Delta^4 psi0), 1>, analytically 0
  double drift_term = 0.0;       ///< (N/100) <y.grad psi0, 1>
  double pairing = 1.0;          ///< <psi0, psi0^*>
  double mu10 = 0.0;
  double target = 0.0;           ///< -N^2/100 = d alpha0/dn at n = 0
  /// |divergence term(levels) - divergence term(levels + 8)|
  double refinement_delta = 0.0;
  std::size_t zeros_graded = 0;
};

/// mu_{1,0} = <-div(ln|psi0| grad Delta^4 psi0) + (N/100) y.grad psi0, 1> / <psi0, 1>.
/// Throws SingularityResolutionError when the divergence term exceeds the tolerance.
Mu10Result mu10(const RadialTable& table, const Mu10Options& options = {});
Mu10Result mu10(int N, const Mu10Options& options = {});

// ---------------------------------------------------------------------------
// Pairings on |beta| = k eigenspaces in 2D.

/// psi_beta = (-1)^|beta| D^beta F / sqrt(beta!) and psi_beta^* = y^beta / sqrt(beta!)
/// for |beta| = k in {1, 2}, ordered (k,0), ..., (0,k).
std::vector<MultiIndex> level_indices(int k);

struct LinearPairings {
  int k = 1;
  /// P[i][j] = <psi_i^*, y.grad psi_j>
  std::vector<std::vector<double>> P;
  /// Q[i][j] = <psi_i, y.grad psi_j>
  std::vector<std::vector<double>> Q;
  /// max |P_ij + (N + k) delta_ij|, the integration-by-parts identity.
  double identity_error = 0.0;
  /// Change of P under doubled radial and angular resolution.
  double refinement_delta = 0.0;
};

/// Polar quadrature of the linear pairings; throws EvaluationError when the
/// refinement change exceeds 1e-6.
LinearPairings linear_pairings(const RadialTable& table2d, int k);

struct LogPairingOptions {
  int levels = 16;            ///< radial grading steps into each zero of Psi along a ray
  double max_panel = 0.5;
  int angular_panels = 32;
  int angular_levels = 16;
  double r_max = 0.0;         ///< 0: table range
  bool check_refinement = false;
};

struct LogPairings {
  /// M[i][j] = int grad psi_i^* . ln|Psi| grad Delta^4 psi_j, Psi = sum c_b psi_b;
  /// then <psi_i^*, div(ln|Psi| grad Delta^4 psi_j)> = -M[i][j].
  std::vector<std::vector<double>> M;
  /// L_i = sum_j c_j M[i][j]
  std::vector<double> L;
  double refinement_delta = 0.0;  ///< filled when check_refinement is set
};

/// Logarithmic pairings with radial panels graded at the zeros of Psi on each
/// polar ray and angular panels graded at the nodal directions.
LogPairings log_pairings(const RadialTable& table2d, int k, std::span<const double> c,
                         const LogPairingOptions& options = {});

// ---------------------------------------------------------------------------
// Dipole system, |beta| = 1, N = 2.

struct DipoleCoefficients {
  LinearPairings pairings;
  double alpha1 = 0.3;         ///< (N + 1)/10
  /// <psi_1^*, y.grad psi_1> - <psi_1^*, y.grad psi_2>
  double nondegeneracy = 0.0;
  bool nondegenerate = false;
};

DipoleCoefficients dipole_coefficients(const RadialTable& table2d);

struct DipoleSolution {
  double seed = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double mu11 = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// The closed-form mu_{1,1} expression evaluated at (c1, c2) from the same pairings.
  double printed_mu11 = 0.0;
  std::string message;
};

struct DipoleReport {
  DipoleCoefficients coefficients;
  std::vector<DipoleSolution> solutions;  ///< one per seed
  /// Converged solutions with distinct c1 but equal mu_{1,1}: a one-parameter family.
  bool continuum = false;
  /// |E_1 - E_2| at c1 = c2 = 1/2 with mu fitted: vanishes by the exchange symmetry.
  double symmetric_antisymmetry = 0.0;
  std::string diagnostic;
};

/// Damped Newton on (c1, mu_{1,1}) with c2 = 1 - c1 from the seeds 0, 1/4, 1/2, 3/4, 1.
DipoleReport dipole_solve(const RadialTable& table2d, const DipoleCoefficients& coefficients,
                          const LogPairingOptions& options = {});

/// Residual of the full dipole system at (c1, c2, mu): two pairing equations and c1 + c2 - 1.
std::array<double, 3> dipole_residual(const RadialTable& table2d, const DipoleCoefficients& coefficients,
                                      double c1, double c2, double mu,
                                      const LogPairingOptions& options = {});

// ---------------------------------------------------------------------------
// Branch counting.

/// F(c2) = A c2^2 + B c2 + C perturbed by omega(c2), c2 in [0, 1].
struct QuadraticBranchProblem {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double omega_norm = 0.0;  ///< ||omega||_inf
};

struct QuadraticBranchResult {
  std::vector<double> roots;  ///< distinct real roots in [0, 1]
  /// Number of roots in [0, 1]; empty when F vanishes identically.
  std::optional<int> count;
  bool linear = false;  ///< A == 0
  bool cond_a = false;  ///< C (A + B + C) > 0
  bool cond_b = false;  ///< C F(c2*) < 0
  bool cond_c = false;  ///< 0 < c2* < 1
  double vertex = 0.0;              ///< c2* = -B/(2A)
  double vertex_value = 0.0;        ///< C - B^2/(4A)
  double vertex_value_printed = 0.0;  ///< -B/(4A) + C
  bool perturbation_ok = false;     ///< ||omega|| <= |F(c2*)|
  std::string note;
};

QuadraticBranchResult quadratic_branch_count(const QuadraticBranchProblem& problem);

enum class ConicType {
  ellipse,
  circle,
  imaginary_ellipse,
  parabola,
  hyperbola,
  rectangular_hyperbola,
  degenerate,
  not_a_conic,  ///< quadratic part vanishes
};
std::string to_string(ConicType t);

struct ConicClassification {
  ConicType type = ConicType::degenerate;
  double discriminant = 0.0;          ///< E^2 - 4AB
  double printed_discriminant = 0.0;  ///< B^2 - 4AE
  ConicType printed_type = ConicType::degenerate;
  std::optional<Point2> stationary;   ///< grad = 0
  double stationary_value = 0.0;
};

ConicClassification classify_conic(const Conic& c);

struct ConicBranchResult {
  std::array<ConicClassification, 2> conics;
  std::vector<Point2> intersections;
  /// Empty when either conic is degenerate or they share a component.
  std::optional<int> count;
  int count_in_simplex = 0;  ///< c2, c3 >= 0 and c2 + c3 <= 1
  bool within_bound = true;  ///< count <= 4
  std::array<bool, 2> perturbation_ok{};
  std::string note;
};

ConicBranchResult conic_branch_count(const Conic& f1, const Conic& f2,
                                     std::array<double, 2> omega_norms = {0.0, 0.0});

// ---------------------------------------------------------------------------
// Coefficient assembly.

struct QuadraticAssembly {
  DipoleCoefficients coefficients;
  /// A, B, C as printed, zeroed when below noise_level; omega_norm from the Galerkin reduction.
  QuadraticBranchProblem problem;
  std::array<double, 3> raw_coefficients{};
  /// Coefficients below this bound are indistinguishable from zero given the pairing accuracy.
  double noise_level = 0.0;
  /// c2^2 coefficient of the Galerkin reduction (printed A with the sign of y.grad(psi1 - psi2)).
  double galerkin_A = 0.0;
  std::vector<double> c2_samples;
  /// Galerkin perturbation -L_2 + c2 (L_1 + L_2) at the samples.
  std::vector<double> omega_samples;
  /// Printed perturbation L_2 + c2 (L_1 + L_2) at the samples.
  std::vector<double> omega_printed_samples;
  QuadraticBranchResult analysis;
  std::vector<std::string> discrepancies;
};

/// A, B, C of the reduced dipole quadratic and the sampled size of omega(c2);
/// omega_samples = 0 skips the logarithmic sampling.
QuadraticAssembly assemble_quadratic_coefficients(const RadialTable& table2d, int omega_samples = 21,
                                                  const LogPairingOptions& options = {});

struct SecondLevelAssembly {
  LinearPairings pairings;
  double alpha2 = 0.4;  ///< (N + 2)/10
  /// Coefficients as printed, with psi_1^* where the printed C_1, D_1 show psi_1.
  std::array<Conic, 2> printed;
  /// C_1, D_1 taken literally with int psi_1 y.grad psi_1.
  std::array<Conic, 2> printed_literal;
  /// Quadratic parts of c2 E_1 - c1 E_2 and c3 E_1 - c1 E_3 with mu eliminated.
  std::array<Conic, 2> galerkin;
  /// Coefficients of all conics below this bound are set to zero (pairing accuracy).
  double noise_level = 0.0;
  /// Sampled sup of the logarithmic parts of the Galerkin conics (empty unless sampled).
  std::optional<std::array<double, 2>> omega_norms;
  ConicBranchResult analysis;
  std::vector<std::string> discrepancies;
};

/// |beta| = 2 system in 2D from three eigenfunctions; samples the logarithmic
/// perturbations at `omega_samples` points of the simplex when positive.
SecondLevelAssembly assemble_second_level(const RadialTable& table2d, int omega_samples = 0,
                                          const LogPairingOptions& options = {});

/// Quadratic parts of c_j E_i - c_i E_j in (c2, c3) with c1 = 1 - c2 - c3, for
/// E_i = -(alpha/10) (P c)_i + c_i mu. Exposed for testing the elimination.
std::array<Conic, 2> galerkin_conics(const std::vector<std::vector<double>>& P, double alpha);

std::string to_json(const Mu10Result& r);
std::string to_json(const DipoleReport& r);
std::string to_json(const QuadraticBranchResult& r);
std::string to_json(const ConicBranchResult& r);
std::string to_json(const QuadraticAssembly& r);
std::string to_json(const SecondLevelAssembly& r);

}  // namespace tfe10::branching
