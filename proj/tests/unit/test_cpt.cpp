#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sociotraffic/cpt.hpp"
#include "sociotraffic/errors.hpp"
#include "sociotraffic/random.hpp"

using namespace sociotraffic;
using cpt::CptParams;
using cpt::Outcome;
using cpt::Prospect;

namespace {

// Independent brute-force oracle: a direct transcription of the valuation
// formulas, sharing no code with the library path.
double oracle_cpt(std::vector<std::pair<double, double>> outcomes, double reference, double bp,
                  double bm, double lambda, double gamma) {
  std::sort(outcomes.begin(), outcomes.end());
  const auto w = [&](double p) {
    return p == 0.0 ? 0.0 : std::exp(-std::pow(-std::log(p), gamma));
  };
  const auto util = [&](double z) {
    return z > reference ? std::pow(z - reference, bp)
                         : -lambda * std::pow(reference - z, bm);
  };
  const std::size_t n = outcomes.size();
  std::size_t g = 0;
  while (g < n && outcomes[g].first <= reference) ++g;

  double total = 0.0;
  double cum = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const double prev = cum;
    cum += outcomes[i].second;
    total += (w(cum) - w(prev)) * util(outcomes[i].first);
  }
  double tail = 0.0;
  for (std::size_t i = n; i-- > g;) {
    const double prev = tail;
    tail += outcomes[i].second;
    total += (w(tail) - w(prev)) * util(outcomes[i].first);
  }
  return total;
}

// lambda must be strictly > 1 by construction; this is close enough to the
// identity limit that the expectation reduction stays inside 1e-12.
const CptParams kIdentity(0.0, 1.0, 1.0, 1.0 + 1e-13, 1.0, 1.0);
const CptParams kClassic(0.0, 0.88, 0.88, 2.25, 0.65, 1.0);

Prospect make_prospect(std::initializer_list<Outcome> outs) {
  return Prospect(std::vector<Outcome>(outs));
}

}  // namespace

TEST_CASE("parameter validation rejects out-of-range values") {
  CHECK_THROWS_AS(CptParams(0, 0.0, 0.88, 2.25, 0.65, 1.0), ValidationError);
  CHECK_THROWS_AS(CptParams(0, 1.2, 0.88, 2.25, 0.65, 1.0), ValidationError);
  CHECK_THROWS_AS(CptParams(0, 0.88, 0.88, 1.0, 0.65, 1.0), ValidationError);
  CHECK_THROWS_AS(CptParams(0, 0.88, 0.88, 2.25, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CptParams(0, 0.88, 0.88, 2.25, 1.5, 1.0), ValidationError);
  CHECK_THROWS_AS(CptParams(0, 0.88, 0.88, 2.25, 0.65, -1.0), ValidationError);
  CHECK_NOTHROW(CptParams(3.0, 1.0, 1.0, 2.0, 1.0, 0.0));
}

TEST_CASE("value function branches and boundary") {
  const CptParams p(1.0, 0.88, 0.88, 2.25, 0.65, 1.0);
  CHECK(cpt::value_function(1.0, p) == 0.0);
  CHECK(cpt::value_function(2.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cpt::value_function(0.0, p) == doctest::Approx(-2.25).epsilon(1e-15));
}

TEST_CASE("prelec weighting identities") {
  for (double gamma : {0.3, 0.65, 1.0}) {
    CHECK(cpt::prelec_weight(1.0, gamma) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cpt::prelec_weight(0.0, gamma) == 0.0);
    CHECK(cpt::prelec_weight(std::exp(-1.0), gamma) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  CHECK(std::abs(cpt::prelec_weight(0.3, 1.0) - 0.3) < 1e-14);
  CHECK_THROWS_AS(cpt::prelec_weight(-0.1, 0.65), std::domain_error);
  CHECK_THROWS_AS(cpt::prelec_weight(1.1, 0.65), std::domain_error);
}

TEST_CASE("prelec weighting is strictly increasing on (0,1]") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 500; ++i) {
    double p1 = 1e-8 + rng::uniform01(gen);
    double p2 = 1e-8 + rng::uniform01(gen);
    p1 = std::min(p1, 1.0);
    p2 = std::min(p2, 1.0);
    if (p1 == p2) continue;
    if (p1 > p2) std::swap(p1, p2);
    const double gamma = 0.2 + 0.8 * rng::uniform01(gen);
    CHECK(cpt::prelec_weight(p1, gamma) < cpt::prelec_weight(p2, gamma));
  }
}

TEST_CASE("prospect validation and loss split") {
  CHECK_THROWS_AS(Prospect({}), ValidationError);
  CHECK_THROWS_AS(make_prospect({{0.0, 0.5}, {1.0, 0.6}}), ValidationError);
  CHECK_THROWS_AS(make_prospect({{0.0, -0.1}, {1.0, 1.1}}), ValidationError);

  // Outcomes arrive unsorted; the prospect sorts them.
  const Prospect p = make_prospect({{2.0, 0.25}, {-1.0, 0.5}, {3.0, 0.25}});
  CHECK(p.outcomes()[0].value == -1.0);
  CHECK(p.loss_count(0.0) == 1);
  CHECK(p.loss_count(-1.0) == 1);  // values at the reference count as losses
  CHECK(p.loss_count(-2.0) == 0);
  CHECK(p.loss_count(5.0) == 3);
}

TEST_CASE("decision weights: degenerate and identity cases") {
  const auto single_loss = cpt::decision_weights(make_prospect({{-1.0, 1.0}}), 0.65, 0.0);
  REQUIRE(single_loss.loss.size() == 1);
  CHECK(single_loss.gain.empty());
  CHECK(single_loss.loss[0] == doctest::Approx(1.0).epsilon(1e-15));

  // gamma = 1 reduces every weight to its raw probability.
  const Prospect p = make_prospect({{-2.0, 0.2}, {-1.0, 0.3}, {1.0, 0.4}, {2.0, 0.1}});
  const auto w = cpt::decision_weights(p, 1.0, 0.0);
  REQUIRE(w.loss.size() == 2);
  REQUIRE(w.gain.size() == 2);
  CHECK(w.loss[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(w.loss[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(w.gain[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(w.gain[1] == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("decision weights: two-loss example against direct Prelec evaluation") {
  // Losses with probabilities (0.3, 0.2) at gamma = 0.65; frozen values
  // w(0.3) = 0.323602844359640, w(0.5) = 0.454744867835472.
  const Prospect p = make_prospect({{-2.0, 0.3}, {-1.0, 0.2}, {1.0, 0.5}});
  const auto w = cpt::decision_weights(p, 0.65, 0.0);
  REQUIRE(w.loss.size() == 2);
  CHECK(w.loss[0] == doctest::Approx(0.323602844359640).epsilon(1e-12));
  CHECK(w.loss[0] + w.loss[1] == doctest::Approx(0.454744867835472).epsilon(1e-12));
}

TEST_CASE("decision weights telescope to the distorted side probabilities") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 8);
    std::vector<Outcome> outs(n);
    double total = 0.0;
    for (auto& o : outs) {
      o.value = -2.0 + 4.0 * rng::uniform01(gen);
      o.probability = 0.05 + rng::uniform01(gen);
      total += o.probability;
    }
    for (auto& o : outs) o.probability /= total;
    // Renormalize exactly enough for the 1e-12 gate.
    double sum = 0.0;
    for (const auto& o : outs) sum += o.probability;
    outs.back().probability += 1.0 - sum;

    const Prospect p(outs);
    const double gamma = 0.2 + 0.8 * rng::uniform01(gen);
    const double reference = -1.0 + 2.0 * rng::uniform01(gen);
    const auto w = cpt::decision_weights(p, gamma, reference);

    double p_loss = 0.0, p_gain = 0.0;
    const std::size_t g = p.loss_count(reference);
    for (std::size_t i = 0; i < p.size(); ++i)
      (i < g ? p_loss : p_gain) += p.outcomes()[i].probability;

    double sum_loss = 0.0, sum_gain = 0.0;
    for (double x : w.loss) sum_loss += x;
    for (double x : w.gain) sum_gain += x;
    CHECK(std::abs(sum_loss - cpt::prelec_weight(p_loss, gamma)) < 1e-12);
    CHECK(std::abs(sum_gain - cpt::prelec_weight(p_gain, gamma)) < 1e-12);
  }
}

TEST_CASE("subjective value: degenerate, identity, and frozen classic cases") {
  for (double z : {-3.0, -0.5, 0.7, 4.0}) {
    const Prospect p = make_prospect({{z, 1.0}});
    CHECK(cpt::cpt_value(p, kClassic) ==
          doctest::Approx(cpt::value_function(z, kClassic)).epsilon(1e-14));
  }

  const Prospect two = make_prospect({{-1.0, 0.5}, {2.0, 0.5}});
  CHECK(std::abs(cpt::cpt_value(two, kIdentity) - 0.5) < 1e-12);

  // Frozen from the brute-force evaluation: w(0.5;0.65) = 0.454744867835472,
  // U(2) = 1.84037530124975, U(-1) = -2.25.
  const double expected = -0.186274729495328;
  CHECK(cpt::cpt_value(two, kClassic) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(oracle_cpt({{-1.0, 0.5}, {2.0, 0.5}}, 0, 0.88, 0.88, 2.25, 0.65) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("subjective value agrees with the brute-force oracle on random prospects") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 6);
    std::vector<std::pair<double, double>> raw(n);
    std::vector<Outcome> outs(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      raw[i].first = -3.0 + 6.0 * rng::uniform01(gen);
      raw[i].second = 0.1 + rng::uniform01(gen);
      total += raw[i].second;
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      raw[i].second /= total;
      sum += raw[i].second;
    }
    raw.back().second += 1.0 - sum;
    for (int i = 0; i < n; ++i) outs[i] = {raw[i].first, raw[i].second};

    const double r = -1.0 + 2.0 * rng::uniform01(gen);
    const CptParams params(r, 0.7, 0.9, 2.0, 0.5, 1.0);
    CHECK(cpt::cpt_value(Prospect(outs), params) ==
          doctest::Approx(oracle_cpt(raw, r, 0.7, 0.9, 2.0, 0.5)).epsilon(1e-11));
  }
}

TEST_CASE("coalescing invariance: splitting an outcome never changes the value") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Outcome> outs = {{-1.5, 0.25}, {-0.25, 0.25}, {0.5, 0.25}, {2.0, 0.25}};
    const std::size_t split = gen() % outs.size();
    std::vector<Outcome> coalesced = outs;
    std::vector<Outcome> refined = outs;
    refined[split].probability /= 2.0;
    refined.push_back({outs[split].value, outs[split].probability / 2.0});

    const double r = -1.0 + 2.0 * rng::uniform01(gen);
    const CptParams params(r, 0.88, 0.88, 2.25, 0.65, 1.0);
    CHECK(std::abs(cpt::cpt_value(Prospect(coalesced), params) -
                   cpt::cpt_value(Prospect(refined), params)) < 1e-10);
  }
}

TEST_CASE("identity parameters reduce the subjective value to the expectation") {
  std::mt19937_64 gen(37);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 6);
    std::vector<Outcome> outs(n);
    double total = 0.0;
    for (auto& o : outs) {
      o.value = -2.0 + 4.0 * rng::uniform01(gen);
      o.probability = 0.1 + rng::uniform01(gen);
      total += o.probability;
    }
    double sum = 0.0;
    for (auto& o : outs) {
      o.probability /= total;
      sum += o.probability;
    }
    outs.back().probability += 1.0 - sum;

    double expectation = 0.0;
    for (const auto& o : outs) expectation += o.value * o.probability;
    CHECK(std::abs(cpt::cpt_value(Prospect(outs), kIdentity) - expectation) < 1e-12);
  }
}

TEST_CASE("monotonicity: raising an outcome weakly raises the value") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Outcome> outs = {{-2.0, 0.2}, {-0.5, 0.3}, {0.5, 0.3}, {1.5, 0.2}};
    const std::size_t idx = gen() % outs.size();
    const double before = cpt::cpt_value(Prospect(outs), kClassic);
    outs[idx].value += 3.0 * rng::uniform01(gen);
    const double after = cpt::cpt_value(Prospect(outs), kClassic);
    CHECK(after >= before - 1e-12);
  }
}

TEST_CASE("empirical estimator: degenerate and identity cases") {
  const std::vector<double> all_same(25, 1.3);
  CHECK(cpt::cpt_value_empirical(all_same, kClassic) ==
        doctest::Approx(cpt::value_function(1.3, kClassic)).epsilon(1e-12));

  const std::vector<double> two = {-1.0, 2.0};
  CHECK(std::abs(cpt::cpt_value_empirical(two, kIdentity) - 0.5) < 1e-12);

  CHECK_THROWS_AS(cpt::cpt_value_empirical({}, kClassic), std::invalid_argument);
}

TEST_CASE("empirical estimator converges to the discrete value") {
  // Exact two-point prospect is the oracle for its own sampled version.
  const Prospect exact = make_prospect({{-1.0, 0.5}, {2.0, 0.5}});
  const double target = cpt::cpt_value(exact, kClassic);

  std::mt19937_64 gen = rng::substream(2024, 0);
  std::vector<double> samples(10000);
  for (auto& z : samples) z = rng::uniform01(gen) < 0.5 ? -1.0 : 2.0;
  CHECK(std::abs(cpt::cpt_value_empirical(samples, kClassic) - target) < 0.02);
}
