#pragma once

#include <span>
#include <utility>
#include <vector>

#include "memsched/channel.hpp"
#include "memsched/reward.hpp"
#include "memsched/subsidy.hpp"

namespace memsched {

// Case regions of the closed-form index, split by the queried belief's
// position relative to the channel landmarks. For positive correlation the
// landmarks order as low_to_high <= steady <= stay_high; for negative
// correlation as stay_high <= steady <= Q(stay_high) <= low_to_high. The
// regions partition [0,1]; boundary points belong to the higher region
// (left-closed intervals), which is immaterial by continuity.
enum class IndexBranch {
    pos_high,     // pi >= stay_high
    pos_mid,      // steady <= pi < stay_high
    pos_low_mid,  // low_to_high <= pi < steady
    pos_low,      // pi < low_to_high
    neg_high,     // pi >= low_to_high
    neg_upper,    // Q(stay_high) <= pi < low_to_high
    neg_mid,      // steady <= pi < Q(stay_high)
    neg_low_mid,  // stay_high <= pi < steady
    neg_low,      // pi < stay_high
};

IndexBranch index_branch(const MarkovChannel& ch, Belief pi);

// Closed-form Whittle index: the subsidy at which transmitting and idling are
// equally attractive at belief pi. Lies in [low_rate, 1] with W(1) = 1.
double whittle_index(const MarkovChannel& ch, const RewardModel& reward, double discount,
                     Belief pi);

// Independent oracle: bisection on the subsidy for the sign change of
// (idle value - transmit value) at pi, each side evaluated by value
// iteration. tol is the bisection width in the subsidy.
double whittle_index_oracle(const MarkovChannel& ch, const RewardModel& reward, double discount,
                            Belief pi, double tol = 1e-7);

// Indexability scan: thresholds pi*(subsidy) along a strictly increasing
// subsidy grid. Grid points at or below low_rate classify always-active and
// are excluded from the strictness check; points at or above 1 are rejected.
struct IndexabilityScan {
    struct Point {
        double subsidy = 0.0;
        ThresholdClass threshold;
    };
    std::vector<Point> points;
    bool strictly_increasing = true;
    // First index i such that interior thresholds at i-1 >= i (tolerance
    // applied); -1 when monotone.
    int violation_at = -1;
};

IndexabilityScan indexability_scan(const MarkovChannel& ch, const RewardModel& reward,
                                   double discount, std::span<const double> subsidy_grid,
                                   double tol = 1e-7);

// Index values along the idle drift from pi0: (t, W(Q^t(pi0))) for
// t = 0..horizon inclusive.
std::vector<std::pair<long, double>> index_trace(const MarkovChannel& ch,
                                                 const RewardModel& reward, double discount,
                                                 Belief pi0, int horizon);

}  // namespace memsched
