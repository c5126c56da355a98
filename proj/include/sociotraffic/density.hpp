#pragma once

#include <span>
#include <vector>

#include "sociotraffic/grid.hpp"

namespace sociotraffic::density {

/// Kernel-smoothed vehicle density sampled on a uniform grid.
struct DensityField {
  Grid1D grid;
  std::vector<double> values;
  double bandwidth = 0.0;

  /// Trapezoidal integral over the sampled points.
  double integral() const;
};

/// Gaussian smoothing kernel with window length a.
double gaussian_kernel(double x, double a);

/// Parzen-Rosenblatt estimate: mean of Gaussian kernels centered at the
/// vehicle positions, evaluated at the grid points. The grid must extend at
/// least 6a beyond every position, otherwise the unit-mass invariant silently
/// fails; insufficient margin is an error.
DensityField kde_density(std::span<const double> positions, double a, const Grid1D& grid);

/// Effective density of the two-class traffic: alpha*rho1 + (1-alpha)*rho2.
DensityField mix_densities(const DensityField& rho1, const DensityField& rho2, double alpha);

}  // namespace sociotraffic::density
