#pragma once

#include <cstdint>
#include <random>

namespace sociotraffic::rng {

/// Derives an independent generator for (seed, index). Substreams are
/// decorrelated with splitmix64 so per-vehicle loops can be scheduled in any
/// order without changing results.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits; identical across
/// platforms for the same engine state.
double uniform01(std::mt19937_64& gen);

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse standard normal CDF (Acklam's rational approximation plus one
/// Newton refinement). Accurate to ~1e-13 over (0,1).
double normal_quantile(double p);

struct TruncatedNormalLaw {
  double mean = 0.0;
  double std = 1.0;
  double lower = 0.0;
  double upper = 1.0;
};

/// One inverse-CDF draw from the truncated normal law. Consumes exactly one
/// uniform from the generator.
double truncated_normal_draw(const TruncatedNormalLaw& law, std::mt19937_64& gen);

}  // namespace sociotraffic::rng
