#pragma once

#include <cstddef>

namespace sociotraffic {

/// Uniform 1-D mesh of n cells over [x_min, x_max]; sample points are the
/// cell centers. Shared by the density estimator (evaluation nodes) and the
/// finite-volume solver (cell averages).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 0;

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n); }
  double point(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx(); }

  bool operator==(const Grid1D&) const = default;
};

}  // namespace sociotraffic
