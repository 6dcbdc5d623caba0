#pragma once

#include <vector>

#include "memsched/channel.hpp"

namespace memsched {

// One estimator / rate-adapter strategy, reduced to its expected successful
// rate per channel state: rate_high when the channel is high, rate_low when
// it is low. rate_low may not exceed the channel's low-state rate (anything
// above it is outage) and rate_high may not exceed 1.
struct PayoffPair {
    double rate_high = 0.0;
    double rate_low = 0.0;
};

// Expected immediate reward R(pi): the pointwise max over payoff pairs of
//   pi * rate_high + (1 - pi) * rate_low,
// hence convex and increasing with R(0) = low_rate and R(1) = 1. Every model
// contains the conservative pair (low_rate, low_rate) and the aggressive pair
// (1, 0), which pin the lower bound max{low_rate, pi}.
class RewardModel {
public:
    // Builds a model from extra strategy pairs; the two mandatory pairs are
    // always appended. Throws std::invalid_argument if a pair violates
    // 0 <= rate_low <= low_rate or 0 <= rate_high <= 1.
    static RewardModel estimation_family(double low_rate, std::vector<PayoffPair> pairs);

    // Mandatory pairs only: R(pi) = max{low_rate, pi}.
    static RewardModel no_estimation(double low_rate);

    // Adds the perfect-information pair (1, low_rate): R(pi) equals the upper
    // bound (1 - low_rate) * pi + low_rate everywhere.
    static RewardModel full_csi(double low_rate);

    // Mandatory pairs plus the mid pair (1 - low_rate/2, low_rate/2): a
    // strictly interior convex curve. The experiment default.
    static RewardModel default_experiment(double low_rate);

    double operator()(Belief pi) const;

    double low_rate() const { return low_rate_; }
    const std::vector<PayoffPair>& pairs() const { return pairs_; }

private:
    RewardModel(double low_rate, std::vector<PayoffPair> pairs);

    double low_rate_;
    std::vector<PayoffPair> pairs_;
};

// Lemma-style bounds on any admissible reward model.
double reward_lower_bound(double low_rate, Belief pi);  // max{low_rate, pi}
double reward_upper_bound(double low_rate, Belief pi);  // (1-low_rate)*pi + low_rate

}  // namespace memsched
