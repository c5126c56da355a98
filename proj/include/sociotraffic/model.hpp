#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>
#include <vector>

#include "sociotraffic/grid.hpp"

namespace sociotraffic::model {

/// State 4-vector (rho1, u1, rho2, u2) at one point.
using State4 = std::array<double, 4>;

enum class Region { main, route };

/// Geometry and class-split parameter of the two-class model. The main
/// segment runs from domain_start to the junction, the route segment (when
/// present) from the junction to domain_end.
struct ModelParams {
  double alpha = 0.5;
  double domain_start = 0.0;
  double junction = 1.0;
  double domain_end = 1.0;

  Region region(double x) const { return x <= junction ? Region::main : Region::route; }
  bool has_route_segment() const { return junction < domain_end; }
  void validate() const;
};

/// Nonzero density/velocity pair per class around which the system is
/// linearized.
struct OperatingPoint {
  double rho1 = 0.0;
  double u1 = 0.0;
  double rho2 = 0.0;
  double u2 = 0.0;

  bool strictly_positive() const { return rho1 > 0 && u1 > 0 && rho2 > 0 && u2 > 0; }
  State4 as_state() const { return {rho1, u1, rho2, u2}; }
};

/// Discretized traffic state over a grid (per-cell values).
struct TrafficState {
  Grid1D grid;
  std::vector<double> rho1, u1, rho2, u2;

  explicit TrafficState(const Grid1D& g)
      : grid(g), rho1(g.n, 0.0), u1(g.n, 0.0), rho2(g.n, 0.0), u2(g.n, 0.0) {}

  State4 cell(std::size_t i) const { return {rho1[i], u1[i], rho2[i], u2[i]}; }
  void set_cell(std::size_t i, const State4& s) {
    rho1[i] = s[0];
    u1[i] = s[1];
    rho2[i] = s[2];
    u2[i] = s[3];
  }
};

/// Per-cell gradient of the optimal driving cost for each class; the zero
/// field is equilibrium flow.
struct CostGradientField {
  Grid1D grid;
  std::vector<double> dH1dx, dH2dx;

  explicit CostGradientField(const Grid1D& g) : grid(g), dH1dx(g.n, 0.0), dH2dx(g.n, 0.0) {}
};

/// Weight multiplying the own-class density in the driving-safety term:
/// alpha or 1-alpha on the main segment, 1 on a route segment.
double density_coefficient(double alpha, int vehicle_class, Region region);

/// Driving cost density: kinetic energy u^2/2, efficiency -u, and safety
/// c * u * rho_own with c from density_coefficient.
double cost_functional(double u, double rho_own, double alpha, int vehicle_class, Region region);

struct ConjugateResult {
  double value = 0.0;      // min_u { cost(u) - u p }
  double minimizer = 0.0;  // argmin
};

/// Numerical Legendre-Fenchel transform (min form) of a strictly convex 1-D
/// cost: golden-section search refined by derivative-based Newton polish.
/// Errors if the objective is unbounded below (p outside the effective
/// domain) or sampled non-convexity defeats the bracket.
ConjugateResult legendre_fenchel(const std::function<double(double)>& cost, double p);

/// Velocity-density relation u = 1 + dH/dx - d, clamped to keep u >= 0.
/// At dH/dx = 0 this is the Greenshields law with slope -1.
double optimal_velocity(double dhdx, double effective_density);

/// optimal_velocity applied over a cost-gradient field with per-class
/// effective densities d1 = alpha*rho1, d2 = (1-alpha)*rho2.
std::pair<std::vector<double>, std::vector<double>> optimal_velocity_field(
    const CostGradientField& field, std::span<const double> rho1, std::span<const double> rho2,
    double alpha);

struct FdPoint {
  double dhdx;
  double d;
  double u;
};

/// Tabulates the fundamental diagram over the product of dH/dx slices and
/// effective densities. Every constant-dhdx slice is a line of slope -1 with
/// maximum velocity 1 + dhdx.
std::vector<FdPoint> fundamental_diagram(std::span<const double> dhdx_values,
                                         std::span<const double> d_grid);

/// Conservation-law flux of the main-segment system.
State4 flux(const State4& eta, double alpha);

/// Flux with explicit per-class density coefficients (c = 1 on routes).
State4 region_flux(const State4& eta, double c1, double c2);

/// Jacobian of the flux at an operating point: block-diagonal with one 2x2
/// block per class.
Eigen::Matrix4d jacobian(const OperatingPoint& op, double alpha);

}  // namespace sociotraffic::model
