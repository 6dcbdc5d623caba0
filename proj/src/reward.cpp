#include "memsched/reward.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace memsched {

RewardModel::RewardModel(double low_rate, std::vector<PayoffPair> pairs)
    : low_rate_(low_rate), pairs_(std::move(pairs)) {}

RewardModel RewardModel::estimation_family(double low_rate, std::vector<PayoffPair> pairs) {
    if (!(low_rate >= 0.0 && low_rate < 1.0))
        throw std::invalid_argument("low_rate must be in [0,1)");
    for (const auto& pp : pairs) {
        if (!(pp.rate_high >= 0.0 && pp.rate_high <= 1.0))
            throw std::invalid_argument("payoff rate_high must be in [0,1]");
        if (!(pp.rate_low >= 0.0 && pp.rate_low <= low_rate))
            throw std::invalid_argument("payoff rate_low must be in [0, low_rate]; rates above the "
                                        "low-state rate are outage");
    }
    pairs.push_back(PayoffPair{low_rate, low_rate});  // conservative
    pairs.push_back(PayoffPair{1.0, 0.0});            // aggressive
    return RewardModel(low_rate, std::move(pairs));
}

RewardModel RewardModel::no_estimation(double low_rate) {
    return estimation_family(low_rate, {});
}

RewardModel RewardModel::full_csi(double low_rate) {
    return estimation_family(low_rate, {PayoffPair{1.0, low_rate}});
}

RewardModel RewardModel::default_experiment(double low_rate) {
    return estimation_family(low_rate, {PayoffPair{1.0 - low_rate / 2.0, low_rate / 2.0}});
}

double RewardModel::operator()(Belief pi) const {
    double best = 0.0;
    for (const auto& pp : pairs_) {
        best = std::max(best, pi * pp.rate_high + (1.0 - pi) * pp.rate_low);
    }
    return best;
}

double reward_lower_bound(double low_rate, Belief pi) {
    return std::max(low_rate, pi);
}

double reward_upper_bound(double low_rate, Belief pi) {
    return (1.0 - low_rate) * pi + low_rate;
}

}  // namespace memsched
