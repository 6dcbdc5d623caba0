#include "memsched/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace memsched {

double pow_int(double base, long exp) {
    double result = 1.0;
    double b = base;
    while (exp > 0) {
        if (exp & 1) result *= b;
        b *= b;
        exp >>= 1;
    }
    return result;
}

Belief clamp_belief(double x) {
    if (x < 0.0) {
        if (x < -1e-12) throw std::logic_error("belief underflow beyond rounding: " + std::to_string(x));
        return 0.0;
    }
    if (x > 1.0) {
        if (x > 1.0 + 1e-12) throw std::logic_error("belief overflow beyond rounding: " + std::to_string(x));
        return 1.0;
    }
    return x;
}

MarkovChannel MarkovChannel::validated(double stay_high, double low_to_high, double low_rate) {
    if (!(stay_high >= 0.0 && stay_high <= 1.0))
        throw std::invalid_argument("stay_high must be in [0,1]");
    if (!(low_to_high >= 0.0 && low_to_high <= 1.0))
        throw std::invalid_argument("low_to_high must be in [0,1]");
    if (!(low_rate >= 0.0 && low_rate < 1.0))
        throw std::invalid_argument("low_rate must be in [0,1)");
    if (stay_high == 1.0 && low_to_high == 0.0)
        throw std::invalid_argument("(stay_high, low_to_high) = (1, 0) has no steady state");
    return MarkovChannel{stay_high, low_to_high, low_rate};
}

Belief feedback_update(const MarkovChannel& ch, bool observed_high) {
    return observed_high ? ch.stay_high : ch.low_to_high;
}

Belief q_step(const MarkovChannel& ch, Belief pi) {
    return clamp_belief(pi * ch.stay_high + (1.0 - pi) * ch.low_to_high);
}

Belief q_iterate(const MarkovChannel& ch, Belief pi, long t) {
    if (t <= 0) return pi;
    const double pi0 = steady_state(ch);
    return clamp_belief(pi0 + pow_int(ch.stay_high - ch.low_to_high, t) * (pi - pi0));
}

Belief steady_state(const MarkovChannel& ch) {
    const double denom = 1.0 + ch.low_to_high - ch.stay_high;
    if (denom == 0.0) throw std::invalid_argument("steady state undefined for (1, 0) channel");
    return clamp_belief(ch.low_to_high / denom);
}

std::optional<long> hitting_time(const MarkovChannel& ch, Belief pi, Belief threshold) {
    if (pi > threshold) return 0;
    const double p = ch.stay_high;
    const double r = ch.low_to_high;
    if (ch.positively_correlated()) {
        const double pi0 = steady_state(ch);
        if (threshold >= pi0) return std::nullopt;
        // Q^t(pi) = pi0 - (p-r)^t (pi0 - pi), increasing toward pi0.
        // First crossing at t > log((pi0-threshold)/(pi0-pi)) / log(p-r).
        const double ratio = (pi0 - threshold) / (pi0 - pi);
        long t = static_cast<long>(std::floor(std::log(ratio) / std::log(p - r))) + 1;
        if (t < 1) t = 1;
        // Absorb floating-point error at the floor boundary.
        while (q_iterate(ch, pi, t) <= threshold) ++t;
        while (t > 1 && q_iterate(ch, pi, t - 1) > threshold) --t;
        return t;
    }
    // Negative correlation (including p == r): the trajectory after one step
    // never exceeds Q(pi) again, so it crosses at t = 1 or never. Evaluated
    // through q_iterate so the crossing test matches the closed form at
    // knife-edge thresholds.
    if (q_iterate(ch, pi, 1) > threshold) return 1;
    return std::nullopt;
}

}  // namespace memsched
