#include "sociotraffic/cpt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::cpt {

CptParams::CptParams(double reference_, double beta_plus_, double beta_minus_,
                     double lambda_, double gamma_, double phi_)
    : reference(reference_),
      beta_plus(beta_plus_),
      beta_minus(beta_minus_),
      lambda(lambda_),
      gamma(gamma_),
      phi(phi_) {
  std::vector<std::string> bad;
  if (!(beta_plus > 0.0 && beta_plus <= 1.0)) bad.push_back("cpt.beta_plus: must lie in (0,1]");
  if (!(beta_minus > 0.0 && beta_minus <= 1.0)) bad.push_back("cpt.beta_minus: must lie in (0,1]");
  if (!(lambda > 1.0)) bad.push_back("cpt.lambda: must be > 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) bad.push_back("cpt.gamma: must lie in (0,1]");
  if (!(phi >= 0.0)) bad.push_back("cpt.phi: must be >= 0");
  if (!bad.empty()) throw ValidationError(bad);
}

Prospect::Prospect(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw ValidationError("prospect: needs at least one outcome");
  std::stable_sort(outcomes_.begin(), outcomes_.end(),
                   [](const Outcome& a, const Outcome& b) { return a.value < b.value; });
  // Kahan summation: the 1e-12 check must not drown in rounding for large N
  // (empirical prospects carry thousands of 1/N entries).
  double total = 0.0, comp = 0.0;
  for (const auto& o : outcomes_) {
    if (!(o.probability >= 0.0 && o.probability <= 1.0))
      throw ValidationError("prospect: probabilities must lie in [0,1]");
    if (!std::isfinite(o.value)) throw ValidationError("prospect: outcome values must be finite");
    const double y = o.probability - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("prospect: probabilities must sum to 1 (got " + std::to_string(total) + ")");
}

std::size_t Prospect::loss_count(double reference) const {
  std::size_t g = 0;
  while (g < outcomes_.size() && outcomes_[g].value <= reference) ++g;
  return g;
}

double value_function(double z, const CptParams& params) {
  if (z > params.reference) return std::pow(z - params.reference, params.beta_plus);
  return -params.lambda * std::pow(params.reference - z, params.beta_minus);
}

double prelec_weight(double p, double gamma) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("prelec_weight: p must lie in [0,1]");
  if (p == 0.0) return 0.0;  // limit value; avoids ln 0
  return std::exp(-std::pow(-std::log(p), gamma));
}

DecisionWeights decision_weights(const Prospect& prospect, double gamma, double reference) {
  const auto& out = prospect.outcomes();
  const std::size_t n = out.size();
  const std::size_t g = prospect.loss_count(reference);

  DecisionWeights w;
  w.loss.reserve(g);
  w.gain.reserve(n - g);

  // Losses: distorted cumulative probability from the worst outcome up.
  double cum = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    cum += out[i].probability;
    const double cur = prelec_weight(cum, gamma);
    w.loss.push_back(cur - prev);
    prev = cur;
  }

  // Gains: distorted tail probability from the best outcome down, then
  // reversed into ascending order.
  double tail = 0.0;
  prev = 0.0;
  for (std::size_t i = n; i-- > g;) {
    tail += out[i].probability;
    const double cur = prelec_weight(tail, gamma);
    w.gain.push_back(cur - prev);
    prev = cur;
  }
  std::reverse(w.gain.begin(), w.gain.end());
  return w;
}

double cpt_value(const Prospect& prospect, const CptParams& params) {
  const auto& out = prospect.outcomes();
  const std::size_t g = prospect.loss_count(params.reference);
  const DecisionWeights w = decision_weights(prospect, params.gamma, params.reference);

  double total = 0.0;
  for (std::size_t i = 0; i < w.loss.size(); ++i)
    total += w.loss[i] * value_function(out[i].value, params);
  for (std::size_t i = 0; i < w.gain.size(); ++i)
    total += w.gain[i] * value_function(out[g + i].value, params);
  return total;
}

double cpt_value_empirical(std::span<const double> samples, const CptParams& params) {
  if (samples.empty()) throw std::invalid_argument("cpt_value_empirical: empty sample list");
  const double p = 1.0 / static_cast<double>(samples.size());
  std::vector<Outcome> out;
  out.reserve(samples.size());
  for (double z : samples) out.push_back({z, p});
  return cpt_value(Prospect(std::move(out)), params);
}

}  // namespace sociotraffic::cpt
