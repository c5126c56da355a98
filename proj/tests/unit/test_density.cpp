#include <doctest.h>

#include <cmath>
#include <vector>

#include "sociotraffic/density.hpp"
#include "sociotraffic/errors.hpp"
#include "sociotraffic/random.hpp"

using namespace sociotraffic;
using density::DensityField;

TEST_CASE("gaussian kernel values and symmetry") {
  CHECK(density::gaussian_kernel(0.0, 1.0) == doctest::Approx(0.398942280401433).epsilon(1e-12));
  const double a = 0.5;
  CHECK(density::gaussian_kernel(a, a) ==
        doctest::Approx(std::exp(-0.5) / (std::sqrt(2.0 * M_PI) * a)).epsilon(1e-12));
  std::mt19937_64 gen(3);
  for (int i = 0; i < 100; ++i) {
    const double x = -3.0 + 6.0 * rng::uniform01(gen);
    CHECK(density::gaussian_kernel(x, 0.1) == density::gaussian_kernel(-x, 0.1));
  }
}

TEST_CASE("single position peaks at the kernel height") {
  const double a = 0.05;
  const Grid1D grid{-1.0, 1.0, 200};  // dx = 0.01, centers at -0.995 + 0.01 k
  const double pos = grid.point(100);
  const auto field = density::kde_density(std::vector<double>{pos}, a, grid);
  CHECK(field.values[100] == doctest::Approx(1.0 / (std::sqrt(2.0 * M_PI) * a)).epsilon(1e-12));

  // Two coincident positions: same field (weights are 1/M).
  const auto field2 = density::kde_density(std::vector<double>{pos, pos}, a, grid);
  for (std::size_t i = 0; i < grid.n; ++i)
    CHECK(field2.values[i] == doctest::Approx(field.values[i]).epsilon(1e-14));
}

TEST_CASE("equispaced positions recover the uniform density") {
  // Oracle: analytic convolution of the uniform density on [0,1] with the
  // Gaussian kernel, evaluated through the normal CDF.
  const double a = 0.02;
  std::vector<double> positions(1000);
  for (std::size_t k = 0; k < positions.size(); ++k)
    positions[k] = (static_cast<double>(k) + 0.5) / 1000.0;

  const Grid1D grid{-0.5, 1.5, 401};  // dx = a/4, margin 0.5 = 25a
  const auto field = density::kde_density(positions, a, grid);

  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.point(i);
    const double exact = rng::normal_cdf(x / a) - rng::normal_cdf((x - 1.0) / a);
    CHECK(std::abs(field.values[i] - exact) < 1e-6);
    if (x >= 0.1 && x <= 0.9) CHECK(std::abs(field.values[i] - 1.0) < 0.1);
  }
}

TEST_CASE("insufficient grid margin is an error") {
  const Grid1D grid{0.0, 1.0, 100};
  CHECK_THROWS_AS(density::kde_density(std::vector<double>{0.5}, 0.2, grid), ValidationError);
  CHECK_THROWS_AS(density::kde_density(std::vector<double>{}, 0.01, grid), ValidationError);
  CHECK_THROWS_AS(density::kde_density(std::vector<double>{0.5}, -0.1, grid), ValidationError);
}

TEST_CASE("unit mass holds for random position sets under the margin rule") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = 0.01 + 0.04 * rng::uniform01(gen);
    const std::size_t count = 5 + gen() % 196;
    std::vector<double> positions(count);
    for (auto& p : positions) p = rng::uniform01(gen);

    const double margin = 6.0 * a + 0.05;
    const double lo = -margin, hi = 1.0 + margin;
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / (a / 2.0)));
    const Grid1D grid{lo, hi, n};

    const auto field = density::kde_density(positions, a, grid);
    const double mass = field.integral();
    CHECK(mass >= 1.0 - 1e-3);
    CHECK(mass <= 1.0);
    for (double v : field.values) CHECK(v >= 0.0);
  }
}

TEST_CASE("translation equivariance is exact") {
  const double a = 0.03;
  const std::vector<double> positions = {0.25, 0.5, 0.625};
  const Grid1D grid{-0.25, 1.25, 300};
  const auto base = density::kde_density(positions, a, grid);

  const double shift = 0.5;
  std::vector<double> shifted = positions;
  for (auto& p : shifted) p += shift;
  const Grid1D shifted_grid{grid.x_min + shift, grid.x_max + shift, grid.n};
  const auto moved = density::kde_density(shifted, a, shifted_grid);

  for (std::size_t i = 0; i < grid.n; ++i) CHECK(base.values[i] == moved.values[i]);
}

TEST_CASE("mixing densities") {
  const Grid1D grid{-1.0, 2.0, 600};
  const auto rho1 = density::kde_density(std::vector<double>{0.2, 0.3, 0.4}, 0.02, grid);
  const auto rho2 = density::kde_density(std::vector<double>{0.7, 0.8}, 0.02, grid);

  SUBCASE("alpha near 1 recovers the first field") {
    const auto mixed = density::mix_densities(rho1, rho2, 1.0 - 1e-12);
    for (std::size_t i = 0; i < grid.n; ++i)
      CHECK(std::abs(mixed.values[i] - rho1.values[i]) < 1e-11);
  }
  SUBCASE("equal fields are a fixed point") {
    const auto mixed = density::mix_densities(rho1, rho1, 0.5);
    for (std::size_t i = 0; i < grid.n; ++i)
      CHECK(mixed.values[i] == doctest::Approx(rho1.values[i]).epsilon(1e-15));
  }
  SUBCASE("mass is conserved under mixing") {
    const auto mixed = density::mix_densities(rho1, rho2, 0.45);
    CHECK(mixed.integral() == doctest::Approx(1.0).epsilon(2e-3));
    for (double v : mixed.values) CHECK(v >= 0.0);
  }
  SUBCASE("grid mismatch and bad alpha are errors") {
    const Grid1D other{-1.0, 2.0, 500};
    const auto rho3 = density::kde_density(std::vector<double>{0.5}, 0.02, other);
    CHECK_THROWS_AS(density::mix_densities(rho1, rho3, 0.5), ValidationError);
    CHECK_THROWS_AS(density::mix_densities(rho1, rho2, 0.0), ValidationError);
    CHECK_THROWS_AS(density::mix_densities(rho1, rho2, 1.0), ValidationError);
  }
}
