#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sociotraffic/cpt.hpp"
#include "sociotraffic/random.hpp"

namespace sociotraffic::route_choice {

/// One traffic alert: either a fixed binary signal, or a Poisson arrival rate
/// from which the signal is realized once per scenario as
/// Bernoulli(1 - e^{-rate}) ("at least one arrival in a unit window").
struct Alert {
  std::optional<int> signal;        // 0 or 1
  std::optional<double> poisson_rate;  // >= 0
  double trust = 0.0;
};

/// The social-signal vector sigma: alerts with trust weights, per-route
/// travel-time laws, the travel-time weight k1, per-route convenience
/// constants k2, the behavioral parameters, and the Monte Carlo settings.
struct SocialScenario {
  std::size_t num_vehicles = 0;
  std::vector<Alert> alerts;
  std::array<rng::TruncatedNormalLaw, 2> travel_time;
  double k1 = 0.0;
  std::array<double, 2> k2{0.0, 0.0};
  cpt::CptParams cpt_params;
  std::uint64_t rng_seed = 0;
  std::size_t samples_per_vehicle = 256;

  void validate() const;
};

struct RouteChoiceOutcome {
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  double alpha = 0.0;  // m1 / (m1 + m2)
  double kappa = 0.0;  // m1 / m2
};

struct VehicleChoice {
  double value1 = 0.0;  // subjective route values
  double value2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  int route = 0;
};

/// Signals realized once per scenario (all vehicles see the same alerts);
/// deterministic in rng_seed.
std::vector<int> realized_signals(const SocialScenario& scenario);

/// Fixed alert contribution sum(a_i S_i) to every utility draw.
double alert_utility(const SocialScenario& scenario);

/// One utility draw Z = sum(a_i S_i) + k1 T + k2[route] for the given route
/// (route in {1,2}); T drawn from the route's truncated normal law.
double sample_route_utility(const SocialScenario& scenario, int route, std::mt19937_64& gen);

/// Logit choice probabilities, computed in the overflow-safe difference form.
std::pair<double, double> route_probabilities(double u1, double u2, double phi);

/// Full pipeline: per vehicle, Monte Carlo utility samples per route ->
/// empirical subjective value -> logit probabilities -> argmax (ties to
/// route 1). Deterministic for a fixed seed. Throws DegenerateSplitError when
/// every vehicle lands on one route. Per-vehicle details are appended to
/// *details when provided.
RouteChoiceOutcome choose_routes(const SocialScenario& scenario,
                                 std::vector<VehicleChoice>* details = nullptr);

/// alpha = M1/(M1+M2); both counts must be nonzero.
double compute_alpha(std::size_t m1, std::size_t m2);

}  // namespace sociotraffic::route_choice
