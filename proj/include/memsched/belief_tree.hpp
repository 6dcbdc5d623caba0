#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "memsched/policies.hpp"

namespace memsched {

// Exact finite-horizon policy evaluation and optimization over the feedback
// outcome tree. Per-user states are (origin, age) pairs -- origin is one of
// {initial belief, after high feedback, after low feedback} and age counts
// idle slots since -- so reachable belief vectors deduplicate across feedback
// histories; (origin, age) pairs with bit-identical beliefs share one
// canonical id, which collapses i.i.d. channels. Supports up to 8 users and
// horizons up to 62.
class ExactEvaluator {
public:
    // kind selects the branching: optimal/random_uniform expand every action,
    // whittle/greedy expand only the policy's choice, no_feedback needs no
    // tree at all.
    ExactEvaluator(const DownlinkSystem& sys, SystemState initial, int horizon_cap,
                   PolicyKind kind);
    ~ExactEvaluator();
    ExactEvaluator(ExactEvaluator&&) noexcept;
    ExactEvaluator& operator=(ExactEvaluator&&) noexcept;

    // Expected discounted reward over `horizon` slots; expands the tree
    // lazily up to the horizon cap.
    double value_at_horizon(int horizon);

    // An optimal first action for the given horizon (optimal kind only);
    // lowest index among maximizers.
    int first_action(int horizon);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace memsched
