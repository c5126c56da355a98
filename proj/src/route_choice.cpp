#include "sociotraffic/route_choice.hpp"

#include <cmath>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::route_choice {

void SocialScenario::validate() const {
  std::vector<std::string> bad;
  if (num_vehicles < 2) bad.push_back("social.num_vehicles: must be >= 2");
  if (samples_per_vehicle < 1) bad.push_back("social.samples_per_vehicle: must be >= 1");
  for (std::size_t i = 0; i < alerts.size(); ++i) {
    const auto& a = alerts[i];
    const std::string path = "social.alerts[" + std::to_string(i) + "]";
    if (a.signal.has_value() == a.poisson_rate.has_value())
      bad.push_back(path + ": exactly one of signal/rate required");
    if (a.signal && *a.signal != 0 && *a.signal != 1)
      bad.push_back(path + ".signal: must be 0 or 1");
    if (a.poisson_rate && !(*a.poisson_rate >= 0.0))
      bad.push_back(path + ".rate: must be >= 0");
  }
  for (int r = 0; r < 2; ++r) {
    const auto& law = travel_time[r];
    const std::string path = "social.travel_time[" + std::to_string(r) + "]";
    if (!(law.std > 0.0)) bad.push_back(path + ".std: must be positive");
    if (!(law.lower < law.upper)) bad.push_back(path + ": lower must be < upper");
  }
  if (!bad.empty()) throw ValidationError(bad);
}

std::vector<int> realized_signals(const SocialScenario& scenario) {
  // Substream 0 is reserved for signal realization; vehicles use 1..M.
  std::mt19937_64 gen = rng::substream(scenario.rng_seed, 0);
  std::vector<int> signals;
  signals.reserve(scenario.alerts.size());
  for (const auto& a : scenario.alerts) {
    if (a.signal) {
      signals.push_back(*a.signal);
    } else {
      const double p_fire = 1.0 - std::exp(-*a.poisson_rate);
      signals.push_back(rng::uniform01(gen) < p_fire ? 1 : 0);
    }
  }
  return signals;
}

double alert_utility(const SocialScenario& scenario) {
  const std::vector<int> signals = realized_signals(scenario);
  double sum = 0.0;
  for (std::size_t i = 0; i < signals.size(); ++i)
    sum += scenario.alerts[i].trust * static_cast<double>(signals[i]);
  return sum;
}

namespace {

double draw_utility(const SocialScenario& scenario, int route, double alert_term,
                    std::mt19937_64& gen) {
  const auto& law = scenario.travel_time[route - 1];
  return alert_term + scenario.k1 * rng::truncated_normal_draw(law, gen) +
         scenario.k2[route - 1];
}

}  // namespace

double sample_route_utility(const SocialScenario& scenario, int route, std::mt19937_64& gen) {
  if (route != 1 && route != 2) throw ValidationError("sample_route_utility: route must be 1 or 2");
  return draw_utility(scenario, route, alert_utility(scenario), gen);
}

std::pair<double, double> route_probabilities(double u1, double u2, double phi) {
  if (!(phi >= 0.0)) throw ValidationError("route_probabilities: phi must be >= 0");
  const double p1 = 1.0 / (1.0 + std::exp(phi * (u2 - u1)));
  return {p1, 1.0 - p1};
}

RouteChoiceOutcome choose_routes(const SocialScenario& scenario,
                                 std::vector<VehicleChoice>* details) {
  scenario.validate();
  const double alert_term = alert_utility(scenario);
  const std::size_t n_samples = scenario.samples_per_vehicle;

  std::size_t m1 = 0;
  std::vector<double> samples(n_samples);
  for (std::size_t k = 0; k < scenario.num_vehicles; ++k) {
    // Independent substream per vehicle: results do not depend on loop order.
    std::mt19937_64 gen = rng::substream(scenario.rng_seed, k + 1);

    double values[2];
    for (int route = 1; route <= 2; ++route) {
      for (auto& z : samples) z = draw_utility(scenario, route, alert_term, gen);
      values[route - 1] = cpt::cpt_value_empirical(samples, scenario.cpt_params);
    }
    const auto [p1, p2] = route_probabilities(values[0], values[1], scenario.cpt_params.phi);
    const int route = p1 >= p2 ? 1 : 2;  // ties go to route 1
    if (route == 1) ++m1;
    if (details) details->push_back({values[0], values[1], p1, p2, route});
  }

  const std::size_t m2 = scenario.num_vehicles - m1;
  if (m1 == 0 || m2 == 0) throw DegenerateSplitError(m1, m2);

  RouteChoiceOutcome out;
  out.m1 = m1;
  out.m2 = m2;
  out.alpha = compute_alpha(m1, m2);
  out.kappa = out.alpha / (1.0 - out.alpha);
  return out;
}

double compute_alpha(std::size_t m1, std::size_t m2) {
  if (m1 == 0 || m2 == 0) throw DegenerateSplitError(m1, m2);
  return static_cast<double>(m1) / static_cast<double>(m1 + m2);
}

}  // namespace sociotraffic::route_choice
