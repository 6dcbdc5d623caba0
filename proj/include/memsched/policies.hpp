#pragma once

#include <string>
#include <vector>

#include "memsched/channel.hpp"
#include "memsched/reward.hpp"

namespace memsched {

struct UserModel {
    MarkovChannel channel;
    RewardModel reward;
};

// One base station, N independent two-state Markov downlink channels, one
// user scheduled per slot.
class DownlinkSystem {
public:
    static DownlinkSystem validated(std::vector<UserModel> users, double discount);

    const std::vector<UserModel>& users() const { return users_; }
    double discount() const { return discount_; }
    int size() const { return static_cast<int>(users_.size()); }

    // Every user's stationary belief.
    std::vector<Belief> steady_initial() const;

private:
    DownlinkSystem(std::vector<UserModel> users, double discount);
    std::vector<UserModel> users_;
    double discount_ = 0.0;
};

// Per-user beliefs, the sufficient statistic of the scheduling POMDP.
using SystemState = std::vector<Belief>;

enum class PolicyKind { whittle, greedy, random_uniform, no_feedback, optimal };
std::string policy_name(PolicyKind kind);
PolicyKind policy_from_name(const std::string& name);

// One slot of belief evolution: the scheduled user jumps on feedback, all
// others drift by q_step.
SystemState transition(const DownlinkSystem& sys, const SystemState& state, int scheduled,
                       bool observed_high);

// Schedule the user with the highest Whittle index; ties to the lowest index.
int whittle_policy(const DownlinkSystem& sys, const SystemState& state);

// Schedule the user with the highest belief; ties to the lowest index.
int greedy_policy(const DownlinkSystem& sys, const SystemState& state);

// Feedback-free baseline: beliefs drift open-loop for every user every slot;
// schedule the user with the highest immediate reward at its open-loop
// belief.
int no_feedback_policy(const DownlinkSystem& sys, const SystemState& open_loop_beliefs);

struct HorizonValue {
    double value = 0.0;
    int first_action = 0;
};

// Exact finite-horizon optimum by dynamic programming over the
// action/feedback tree, deduplicating states that reach identical belief
// vectors. Throws if horizon exceeds the cap (outcome trees grow as 2^M) or
// the system has more than 8 users.
HorizonValue optimal_finite_horizon(const DownlinkSystem& sys, const SystemState& state,
                                    int horizon, int horizon_cap = 14);

}  // namespace memsched
