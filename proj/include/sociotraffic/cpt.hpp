#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sociotraffic::cpt {

/// Behavioral parameter tuple of the subjective valuation model.
/// reference R separates losses from gains; lambda > 1 is loss aversion;
/// beta_plus/beta_minus in (0,1] are the diminishing sensitivities; gamma in
/// (0,1] shapes the probability distortion; phi >= 0 is the logit
/// sensitivity consumed by the route-choice layer.
struct CptParams {
  CptParams(double reference, double beta_plus, double beta_minus, double lambda,
            double gamma, double phi);

  /// Classic Tversky-Kahneman estimates with unit logit sensitivity.
  CptParams() : CptParams(0.0, 0.88, 0.88, 2.25, 0.65, 1.0) {}

  double reference;
  double beta_plus;
  double beta_minus;
  double lambda;
  double gamma;
  double phi;
};

struct Outcome {
  double value = 0.0;
  double probability = 0.0;
};

/// A finite prospect: outcome values with probabilities, kept sorted by
/// value (ascending). Probabilities must sum to 1 within 1e-12.
class Prospect {
public:
  explicit Prospect(std::vector<Outcome> outcomes);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  std::size_t size() const { return outcomes_.size(); }

  /// Number of outcomes classified as losses (value <= reference). Derived
  /// on demand so it can never disagree with the reference in use.
  std::size_t loss_count(double reference) const;

private:
  std::vector<Outcome> outcomes_;
};

/// Reference-dependent value function: (z-R)^beta+ for gains,
/// -lambda*(R-z)^beta- for losses; 0 at z = R.
double value_function(double z, const CptParams& params);

/// Prelec probability weighting w(p) = exp(-(-ln p)^gamma), with w(0) = 0 by
/// continuous extension. Inverse-S shaped for gamma < 1.
double prelec_weight(double p, double gamma);

struct DecisionWeights {
  std::vector<double> loss;  // one per loss outcome, ascending value order
  std::vector<double> gain;  // one per gain outcome, ascending value order
};

/// Rank-dependent decision weights: differences of the Prelec-distorted
/// cumulative distribution, taken from the loss end for losses and the gain
/// end for gains. The weights telescope: sum(loss) = w(P[loss]),
/// sum(gain) = w(P[gain]).
DecisionWeights decision_weights(const Prospect& prospect, double gamma, double reference);

/// Subjective value of a prospect: decision-weighted sum of outcome values.
double cpt_value(const Prospect& prospect, const CptParams& params);

/// Empirical-distribution estimate for a continuous utility: each sample gets
/// probability 1/N and the discrete machinery applies.
double cpt_value_empirical(std::span<const double> samples, const CptParams& params);

}  // namespace sociotraffic::cpt
