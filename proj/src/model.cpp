#include "sociotraffic/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::model {

void ModelParams::validate() const {
  std::vector<std::string> bad;
  if (!(alpha > 0.0 && alpha < 1.0)) bad.push_back("model.alpha: must lie in (0,1)");
  if (!(domain_start < junction)) bad.push_back("model.junction: must be > domain start");
  if (!(junction <= domain_end)) bad.push_back("model.junction: must be <= domain end");
  if (!bad.empty()) throw ValidationError(bad);
}

double density_coefficient(double alpha, int vehicle_class, Region region) {
  if (region == Region::route) return 1.0;
  return vehicle_class == 1 ? alpha : 1.0 - alpha;
}

double cost_functional(double u, double rho_own, double alpha, int vehicle_class, Region region) {
  const double c = density_coefficient(alpha, vehicle_class, region);
  return 0.5 * u * u - u + c * u * rho_own;
}

namespace {

constexpr double kBracketLimit = 1e8;

// Expands [lo, hi] until an interior minimum is bracketed.
void expand_bracket(const std::function<double(double)>& f, double& lo, double& hi) {
  double flo = f(lo), fhi = f(hi);
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid <= flo && fmid <= fhi) return;
    if (flo < fhi) {
      hi = mid;
      fhi = fmid;
      lo = lo - (hi - lo);
      flo = f(lo);
    } else {
      lo = mid;
      flo = fmid;
      hi = hi + (hi - lo);
      fhi = f(hi);
    }
    if (std::abs(lo) > kBracketLimit || std::abs(hi) > kBracketLimit)
      throw ValidationError(
          "legendre_fenchel: objective unbounded below; p lies outside the effective domain");
  }
}

}  // namespace

ConjugateResult legendre_fenchel(const std::function<double(double)>& cost, double p) {
  const auto objective = [&](double u) { return cost(u) - u * p; };

  double lo = -4.0, hi = 4.0;
  expand_bracket(objective, lo, hi);

  // Golden section down to a 1e-6 bracket. Tighter brackets are pointless:
  // near a quadratic minimum the value differences fall below double
  // rounding at ~sqrt(eps), so the final digits come from the Newton polish.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = objective(x2);
    }
  }

  // Two Newton steps on the central-difference derivative reach ~1e-10.
  double u = 0.5 * (a + b);
  const double h = 1e-5;
  for (int it = 0; it < 2; ++it) {
    const double fp = objective(u + h), fm = objective(u - h), f0 = objective(u);
    const double d1 = (fp - fm) / (2.0 * h);
    const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
    if (!(d2 > 0.0))
      throw ValidationError("legendre_fenchel: non-convex objective near the minimizer");
    u -= d1 / d2;
  }

  const double fu = objective(u);

  // A coarse sweep must not find anything lower: a second basin means the
  // bracketing assumption (strict convexity) was violated.
  const double span = hi - lo;
  for (int i = 0; i <= 64; ++i) {
    const double x = lo + span * static_cast<double>(i) / 64.0;
    if (objective(x) < fu - 1e-9)
      throw ValidationError("legendre_fenchel: non-convex cost (bracketing failure)");
  }

  return {fu, u};
}

double optimal_velocity(double dhdx, double effective_density) {
  const double u_max = std::max(0.0, 1.0 + dhdx);
  return std::clamp(1.0 + dhdx - effective_density, 0.0, u_max);
}

std::pair<std::vector<double>, std::vector<double>> optimal_velocity_field(
    const CostGradientField& field, std::span<const double> rho1, std::span<const double> rho2,
    double alpha) {
  const std::size_t n = field.grid.n;
  std::vector<double> u1(n), u2(n);
  for (std::size_t i = 0; i < n; ++i) {
    u1[i] = optimal_velocity(field.dH1dx[i], alpha * rho1[i]);
    u2[i] = optimal_velocity(field.dH2dx[i], (1.0 - alpha) * rho2[i]);
  }
  return {std::move(u1), std::move(u2)};
}

std::vector<FdPoint> fundamental_diagram(std::span<const double> dhdx_values,
                                         std::span<const double> d_grid) {
  std::vector<FdPoint> table;
  table.reserve(dhdx_values.size() * d_grid.size());
  for (double dhdx : dhdx_values)
    for (double d : d_grid) table.push_back({dhdx, d, optimal_velocity(dhdx, d)});
  return table;
}

State4 flux(const State4& eta, double alpha) { return region_flux(eta, alpha, 1.0 - alpha); }

State4 region_flux(const State4& eta, double c1, double c2) {
  const double rho1 = eta[0], u1 = eta[1], rho2 = eta[2], u2 = eta[3];
  return {rho1 * u1, 0.5 * u1 * u1 - c1 * rho1 * u1, rho2 * u2, 0.5 * u2 * u2 - c2 * rho2 * u2};
}

Eigen::Matrix4d jacobian(const OperatingPoint& op, double alpha) {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 0) = op.u1;
  j(0, 1) = op.rho1;
  j(1, 0) = -alpha * op.u1;
  j(1, 1) = op.u1 - alpha * op.rho1;
  j(2, 2) = op.u2;
  j(2, 3) = op.rho2;
  j(3, 2) = -(1.0 - alpha) * op.u2;
  j(3, 3) = op.u2 - (1.0 - alpha) * op.rho2;
  return j;
}

}  // namespace sociotraffic::model
