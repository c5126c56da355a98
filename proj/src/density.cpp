#include "sociotraffic/density.hpp"

#include <algorithm>
#include <cmath>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::density {

double DensityField::integral() const {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * grid.dx();
}

double gaussian_kernel(double x, double a) {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  return inv_sqrt_2pi / a * std::exp(-x * x / (2.0 * a * a));
}

DensityField kde_density(std::span<const double> positions, double a, const Grid1D& grid) {
  if (positions.empty()) throw ValidationError("kde_density: positions must be nonempty");
  if (!(a > 0.0)) throw ValidationError("kde_density: bandwidth must be positive");
  if (grid.n < 2) throw ValidationError("kde_density: grid needs at least 2 points");

  const auto [lo_it, hi_it] = std::minmax_element(positions.begin(), positions.end());
  if (*lo_it - grid.point(0) < 6.0 * a || grid.point(grid.n - 1) - *hi_it < 6.0 * a)
    throw ValidationError("kde_density: grid must extend >= 6a beyond all positions");

  DensityField field{grid, std::vector<double>(grid.n, 0.0), a};
  const double weight = 1.0 / static_cast<double>(positions.size());
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.point(i);
    double v = 0.0;
    for (double xk : positions) v += gaussian_kernel(x - xk, a);
    field.values[i] = weight * v;
  }
  return field;
}

DensityField mix_densities(const DensityField& rho1, const DensityField& rho2, double alpha) {
  if (rho1.grid != rho2.grid) throw ValidationError("mix_densities: grids must be identical");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("mix_densities: alpha must lie in (0,1)");

  DensityField out{rho1.grid, std::vector<double>(rho1.values.size()), std::max(rho1.bandwidth, rho2.bandwidth)};
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = alpha * rho1.values[i] + (1.0 - alpha) * rho2.values[i];
  return out;
}

}  // namespace sociotraffic::density
