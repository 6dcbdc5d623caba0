#pragma once

#include <optional>

namespace memsched {

// Posterior probability that a channel is in the high state. Kept as a plain
// double; construction sites validate the [0,1] range.
using Belief = double;

// Two-state Markov channel. The high state supports rate 1, the low state
// supports rate low_rate (< 1). stay_high = P(high -> high), low_to_high =
// P(low -> high). (stay_high, low_to_high) = (1, 0) is rejected: the chain
// would not be ergodic and the steady state is undefined.
struct MarkovChannel {
    double stay_high = 0.5;    // P(high | high)
    double low_to_high = 0.5;  // P(high | low)
    double low_rate = 0.0;     // achievable rate in the low state

    // Validates ranges and the ergodicity requirement; throws
    // std::invalid_argument on violation.
    static MarkovChannel validated(double stay_high, double low_to_high, double low_rate);

    // stay_high > low_to_high: the idle belief converges monotonically.
    // Otherwise (including stay_high == low_to_high) it oscillates around the
    // steady state with a shrinking envelope.
    bool positively_correlated() const { return stay_high > low_to_high; }
};

// Belief after scheduling this user, given the end-of-slot feedback.
Belief feedback_update(const MarkovChannel& ch, bool observed_high);

// One idle-slot belief update: Q(x) = x*stay_high + (1-x)*low_to_high.
// Result lies in [min(stay_high, low_to_high), max(stay_high, low_to_high)].
Belief q_step(const MarkovChannel& ch, Belief pi);

// t-fold composition of q_step, evaluated in closed form. t = 0 returns pi.
Belief q_iterate(const MarkovChannel& ch, Belief pi, long t);

// Stationary probability of the high state.
Belief steady_state(const MarkovChannel& ch);

// Smallest t >= 0 with q_iterate(ch, pi, t) > threshold, or nullopt when the
// idle trajectory never exceeds the threshold.
std::optional<long> hitting_time(const MarkovChannel& ch, Belief pi, Belief threshold);

// Integer power by repeated squaring; deterministic across platforms.
double pow_int(double base, long exp);

// Clamps values that drift out of [0,1] by floating-point rounding only.
// Throws std::logic_error if the excursion exceeds 1e-12 (a logic bug, not
// rounding).
Belief clamp_belief(double x);

}  // namespace memsched
