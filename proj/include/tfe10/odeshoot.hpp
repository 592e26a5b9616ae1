#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tfe10/core/newton.hpp"
#include "tfe10/types.hpp"

/// Adaptive integration of radial ODE systems and multi-parameter shooting
/// with an optional free boundary.
namespace tfe10::odeshoot {

using State = std::vector<double>;
/// du/dt = G(t, u), written into du.
using Rhs = std::function<void(double t, std::span<const double> u, std::span<double> du)>;

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double blowup_threshold = 1e12;
  double min_step = 1e-14;
  /// First trial step; 0 selects one from the initial slope.
  double initial_step = 0.0;
  std::size_t max_steps = 2'000'000;
  /// Points the integrator must land on exactly (sorted, inside the interval).
  std::vector<double> stops;
  /// When nonempty, steps go exactly through these mesh points without error
  /// control. Makes the end state a smooth function of the initial data.
  std::vector<double> replay_mesh;
};

enum class Termination { reached_end, blow_up, step_underflow, step_limit };
std::string to_string(Termination t);

struct IVPResult {
  std::vector<double> t;
  std::vector<State> u;
  std::vector<State> du;
  Termination termination = Termination::reached_end;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  /// Largest accepted local error relative to the tolerance (<= 1).
  double max_error_ratio = 0.0;

  bool reached_end() const { return termination == Termination::reached_end; }
  const State& final_state() const { return u.back(); }
  /// Cubic Hermite interpolation between stored steps.
  State interpolate(double at) const;
};

/// Dormand-Prince 5(4) with per-component mixed tolerance, max norm.
IVPResult integrate(const Rhs& rhs, double t0, std::span<const double> u0, double t1,
                    const IntegratorOptions& options = {});

/// (f^2 + delta^2)^{n/2}; exactly 1 when n = 0.
double regularized_mobility(double f, double n, double delta);

/// Radial models in the iterated-Laplacian state
/// (w0, w0', w1, w1', w2, w2', w3, w3', w4), w_j = Delta^j f, ' = d/dr, where
///   (w_j')' = w_{j+1} - (N-1)/r w_j'   (limit w_{j+1}/N at r = 0)
///   w4'    = [flux(f, f') - beta r f] / mob(f).
/// In 1D the state is the derivative chain (f, ..., f^{(8)}).
enum class RadialModel {
  thin_film,  ///< flux = 0
  unstable,   ///< flux = kappa p |f|^{p-1} f'
};

struct ModelParameters {
  RadialModel model = RadialModel::thin_film;
  int dimension = 1;
  double n = 1.0;
  double p = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 1e-10;
  /// kappa in the unstable flux; values below 1 serve as a homotopy from the thin film.
  double flux_coefficient = 1.0;
};

inline constexpr std::size_t radial_state_size = 9;
Rhs radial_rhs(const ModelParameters& params);

/// Shooting setup. Unknown entries of the origin state are taken from the
/// shooting vector in order; with a free boundary the last entry is the end
/// point y0 and the system is integrated on s = y/y0 in [0, 1].
struct ShootingSpec {
  std::size_t system_dimension = 0;
  std::string model;  ///< descriptor for reports
  Rhs rhs;
  State origin_state;
  std::vector<std::size_t> unknown_indices;
  bool free_boundary = false;
  double y_end = 1.0;  ///< fixed endpoint (ignored with a free boundary)
  std::vector<std::size_t> target_indices;
  std::vector<double> target_values;
  ModelParameters params;

  std::size_t unknown_count() const { return unknown_indices.size() + (free_boundary ? 1 : 0); }
  /// Throws InvalidArgument on inconsistent setups.
  void validate() const;
};

/// Integrates a spec from the origin state with the given unknowns to the
/// endpoint, in physical y (the trajectory's t holds y).
IVPResult integrate(const ShootingSpec& spec, std::span<const double> unknowns,
                    const IntegratorOptions& options = {});

struct ShootOptions {
  static NewtonOptions default_newton() {
    NewtonOptions o;
    o.tol = 1e-9;
    o.max_iter = 40;
    return o;
  }

  IntegratorOptions integrator;
  NewtonOptions newton = default_newton();
  /// Success threshold on the boundary residuals.
  double residual_tol = 1e-8;
  /// When the adaptive-mesh Newton fails, this many passes of Newton on the
  /// residual replayed over a frozen mesh (smooth in the unknowns), each
  /// followed by re-meshing at the new iterate.
  int frozen_mesh_passes = 0;
};

struct ShootResult {
  bool converged = false;
  std::vector<double> unknowns;
  std::vector<double> residuals;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> damping_history;
  std::string message;
  /// Trajectory at the returned unknowns (physical y).
  IVPResult trajectory;
  std::optional<double> interface;
};

/// Residuals u_{target_i}(y_end) - value_i. Throws EvaluationError when the
/// integration does not reach the endpoint.
std::vector<double> shooting_residual(const ShootingSpec& spec, std::span<const double> unknowns,
                                      const IntegratorOptions& options = {},
                                      IVPResult* trajectory = nullptr);

/// Damped Newton on the shooting residual. Each Jacobian replays the adaptive
/// mesh of the current iterate so finite differences see a smooth map.
/// Throws EvaluationError ("shooting window") when the guess itself blows up.
ShootResult shoot(const ShootingSpec& spec, std::vector<double> guess, const ShootOptions& options = {});

/// Max over interior points of |u_i' - G_i| / max|G_i| using sixth-order
/// differences on `points` uniform samples.
double interior_consistency(const ShootingSpec& spec, std::span<const double> unknowns,
                            std::size_t points = 4001, const IntegratorOptions& options = {});

/// Profile with y, f and the remaining state columns as derivatives.
RadialProfile to_profile(const IVPResult& trajectory, int dimension,
                         std::optional<double> interface = std::nullopt);

/// CSV header for a radial state of the given dimension: `y,f,f1,...,f9` in 1D.
std::string trajectory_header(int dimension);
/// JSON diagnostics record {unknowns, residuals, iterations, termination}.
std::string diagnostics_json(const ShootResult& result);

}  // namespace tfe10::odeshoot
