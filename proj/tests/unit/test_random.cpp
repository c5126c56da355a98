#include <doctest.h>

#include <cmath>

#include "sociotraffic/random.hpp"

using namespace sociotraffic;

TEST_CASE("normal_quantile inverts the normal CDF") {
  std::mt19937_64 gen(123);
  for (int i = 0; i < 2000; ++i) {
    const double p = 1e-6 + (1.0 - 2e-6) * rng::uniform01(gen);
    const double x = rng::normal_quantile(p);
    CHECK(std::abs(rng::normal_cdf(x) - p) < 1e-12);
  }
  CHECK(rng::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("truncated normal draws stay inside the window") {
  rng::TruncatedNormalLaw law{0.5, 0.15, 0.0, 1.0};
  std::mt19937_64 gen = rng::substream(42, 1);
  double lo = 1e9, hi = -1e9, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng::truncated_normal_draw(law, gen);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
  }
  CHECK(lo >= 0.0);
  CHECK(hi <= 1.0);
  // Symmetric window around the mean keeps the sample mean close to it.
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("truncated normal handles off-window means") {
  // Mean far outside: draws come from the tail slice, all inside the window.
  rng::TruncatedNormalLaw law{-5.0, 0.5, 0.0, 1.0};
  std::mt19937_64 gen = rng::substream(9, 3);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng::truncated_normal_draw(law, gen);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("substreams are deterministic and decorrelated") {
  auto a1 = rng::substream(7, 1);
  auto a2 = rng::substream(7, 1);
  auto b = rng::substream(7, 2);
  bool all_equal = true;
  bool any_cross_equal = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a1(), y = a2(), z = b();
    all_equal = all_equal && (x == y);
    any_cross_equal = any_cross_equal || (x == z);
  }
  CHECK(all_equal);
  CHECK_FALSE(any_cross_equal);
}
