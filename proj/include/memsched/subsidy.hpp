#pragma once

#include <span>
#include <vector>

#include "memsched/channel.hpp"
#include "memsched/reward.hpp"

namespace memsched {

// Single-user problem: each slot either transmit (collect R(pi), belief jumps
// to stay_high/low_to_high on feedback) or idle (collect the subsidy, belief
// drifts by q_step). Infinite-horizon discounted criterion.
struct SubsidyProblem {
    MarkovChannel channel;
    RewardModel reward;
    double discount = 0.0;  // in [0,1)
    double subsidy = 0.0;   // any real

    // Validates discount range and that the reward model's low_rate matches
    // the channel's.
    static SubsidyProblem validated(MarkovChannel ch, RewardModel reward, double discount,
                                    double subsidy);
};

// The optimal subsidy policy transmits iff pi > threshold. always_active
// (subsidy <= low_rate) and always_idle (subsidy >= 1) have no interior
// threshold; in between the threshold lies in (0,1).
struct ThresholdClass {
    enum class Kind { always_active, interior, always_idle };
    Kind kind = Kind::interior;
    double threshold = 0.0;  // meaningful for interior only

    static ThresholdClass always_active() { return {Kind::always_active, 0.0}; }
    static ThresholdClass always_idle() { return {Kind::always_idle, 1.0}; }
    static ThresholdClass interior(double t) { return {Kind::interior, t}; }
};

// Closed-form value-function anchors: the optimal discounted reward starting
// from the two post-feedback beliefs.
struct AnchorValues {
    double after_high = 0.0;  // V at belief stay_high
    double after_low = 0.0;   // V at belief low_to_high
};

// Tabulated value function on a sorted belief grid, produced by value
// iteration. Exact at grid points up to the sweep tolerance; linear
// interpolation in between.
class ValueTable {
public:
    ValueTable(std::vector<double> grid, std::vector<double> value, int sweeps);

    double at(Belief x) const;
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return value_; }
    int sweeps() const { return sweeps_; }

    // Index of an exactly inserted grid point; throws if absent.
    int exact_index(double x) const;

private:
    std::vector<double> grid_;
    std::vector<double> value_;
    int sweeps_ = 0;
};

// Three-case classification of the subsidy policy; interior thresholds are
// located with the value-iteration oracle (solve_threshold).
ThresholdClass classify_threshold(const SubsidyProblem& prob);

// Exact discounted reward of the never-idle policy from a starting belief:
// one-step expansion into the closed 2x2 system over the post-feedback
// beliefs.
double always_active_value(const SubsidyProblem& prob, Belief start);

// Closed-form anchors for a given threshold classification. For interior
// thresholds the (subsidy, threshold) pair must be mutually consistent; a
// residual check of the indifference condition at the threshold throws
// std::logic_error on contract violation.
AnchorValues anchor_values(const SubsidyProblem& prob, const ThresholdClass& pi_star);

// Value at an arbitrary belief from the anchors: idle along the deterministic
// drift until the threshold is crossed, then one transmit step into the
// anchors.
double value_at(const SubsidyProblem& prob, const ThresholdClass& pi_star,
                const AnchorValues& anchors, Belief pi);

// Independent oracle: iterates the Bellman operator on a belief grid until
// the sup-norm successive difference guarantees `tol` accuracy. The grid is
// the uniform grid plus the exact points {stay_high, low_to_high, steady,
// Q(stay_high), Q(low_to_high)}, the idle orbits of stay_high / low_to_high,
// and the idle orbits of any extra points (so values there avoid
// interpolation error). Throws std::runtime_error if the sweep cap is hit.
ValueTable value_iteration(const SubsidyProblem& prob, int grid_size = 1001,
                           int max_sweeps = 200000, double tol = 1e-9,
                           std::span<const Belief> extra_points = {});

// Oracle-side threshold solver for low_rate < subsidy < 1: bisection on the
// sign change of (transmit value - idle value) over a value-iteration table.
// Accuracy ~1e-8 in the threshold.
ThresholdClass solve_threshold(const SubsidyProblem& prob);

// Transmit- and idle-branch values at pi read off a value table.
double transmit_value(const SubsidyProblem& prob, const ValueTable& table, Belief pi);
double idle_value(const SubsidyProblem& prob, const ValueTable& table, Belief pi);

}  // namespace memsched
