#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "sociotraffic/model.hpp"

namespace sociotraffic::solver {

enum class Scheme { local_lax_friedrichs, upwind_linearized };
enum class PerturbationShape { gaussian_bump, sinusoid };

/// Initial deviation from the operating point, per state component.
/// For the Gaussian bump, width is the standard deviation; for the sinusoid
/// it is the wavelength.
struct Perturbation {
  PerturbationShape shape = PerturbationShape::gaussian_bump;
  std::array<double, 4> amplitude{0.01, 0.0, 0.01, 0.0};
  double center = 0.5;
  double width = 0.1;
};

struct SolverConfig {
  std::size_t cells = 200;
  double cfl = 0.9;
  double t_end = 50.0;
  double output_interval = 0.5;
  Scheme scheme = Scheme::local_lax_friedrichs;
  Eigen::Matrix4d g_b = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d g_c = Eigen::Matrix4d::Zero();
  model::OperatingPoint op;
  Perturbation perturbation;

  void validate() const;
};

/// Shared per-step environment: segment split, boundary data, CFL guard.
struct StepContext {
  std::size_t junction_cells = 0;  // cells in the main segment; == n means no route segment
  model::OperatingPoint op;
  Eigen::Matrix4d g_b = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d g_c = Eigen::Matrix4d::Zero();
  double cfl = 0.9;
  bool zero_flux_boundaries = false;  // conservation test mode: sealed domain ends
};

struct StepStats {
  int floored = 0;
  double junction_residual_pre = 0.0;
  double junction_residual_post = 0.0;
};

/// Downstream (right-end) ghost state per segment, built from the segment's
/// upstream trace in deviation variables: ghost = eta* + G (trace - eta*).
struct BoundaryGhosts {
  model::State4 main_downstream;
  std::optional<model::State4> route_downstream;
};

BoundaryGhosts apply_boundary(const model::TrafficState& state, const Eigen::Matrix4d& g_b,
                              const Eigen::Matrix4d& g_c, const model::OperatingPoint& op,
                              std::size_t junction_cells);

/// Mass-flux coupling across the junction: the alpha-weighted upstream class
/// fluxes must equal the unweighted downstream ones; the downstream fluxes
/// are rescaled proportionally to enforce it.
struct JunctionCoupling {
  double flux1 = 0.0;  // corrected class-1 mass flux on the downstream side
  double flux2 = 0.0;
  double residual_pre = 0.0;   // imbalance before rescaling
  double residual_post = 0.0;  // after rescaling (rounding only)
};

JunctionCoupling junction_flux(const model::State4& left, const model::State4& right,
                               double alpha);

/// Largest characteristic speed over the current state (region-aware), used
/// for the CFL bound cfl * dx / max|lambda|.
double max_wave_speed(const model::TrafficState& state, double alpha,
                      std::size_t junction_cells);

/// One local Lax-Friedrichs step of the nonlinear conservation system.
/// Densities are floored at zero; the flooring count lands in stats.
model::TrafficState step_nonlinear(const model::TrafficState& state, double dt, double alpha,
                                   const StepContext& ctx, StepStats* stats = nullptr);

/// One characteristic-upwind step of the linearized system eta_t + J eta_x = 0.
/// Requires a strictly hyperbolic block-diagonal Jacobian and no route segment.
model::TrafficState step_linearized(const model::TrafficState& state, double dt,
                                    const Eigen::Matrix4d& jac, const StepContext& ctx);

/// Per-class L2 deviation norms ||eta - eta*|| (density and velocity of the
/// class, midpoint quadrature).
std::pair<double, double> class_deviation_norms(const model::TrafficState& state,
                                                const model::OperatingPoint& op);

model::TrafficState initial_state(const Grid1D& grid, const model::OperatingPoint& op,
                                  const Perturbation& perturbation);

struct Trajectory {
  std::vector<double> times;
  std::vector<model::TrafficState> states;
  std::vector<double> norm_class1;
  std::vector<double> norm_class2;
  bool lemma1_satisfied = true;
  int floored_cells = 0;
  double max_junction_residual_pre = 0.0;
  double max_junction_residual_post = 0.0;
};

/// Integrates the configured scheme to t_end, recording states and deviation
/// norms at the output interval. Deterministic. Warns (and records the flag)
/// when the operating point fails the strict-hyperbolicity conditions.
Trajectory run_simulation(const SolverConfig& config, const model::ModelParams& params);

}  // namespace sociotraffic::solver
