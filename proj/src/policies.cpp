#include "memsched/policies.hpp"

#include <stdexcept>
#include <utility>

#include "memsched/belief_tree.hpp"
#include "memsched/whittle.hpp"

namespace memsched {
namespace {

template <typename Score>
int argmax_user(int n, Score&& score) {
    int best = 0;
    double best_score = score(0);
    for (int i = 1; i < n; ++i) {
        const double s = score(i);
        if (s > best_score) {
            best_score = s;
            best = i;
        }
    }
    return best;
}

void check_state(const DownlinkSystem& sys, const SystemState& state) {
    if (static_cast<int>(state.size()) != sys.size())
        throw std::invalid_argument("belief vector length does not match the user count");
    for (double b : state)
        if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("belief outside [0,1]");
}

}  // namespace

DownlinkSystem::DownlinkSystem(std::vector<UserModel> users, double discount)
    : users_(std::move(users)), discount_(discount) {}

DownlinkSystem DownlinkSystem::validated(std::vector<UserModel> users, double discount) {
    if (users.empty()) throw std::invalid_argument("system needs at least one user");
    if (!(discount >= 0.0 && discount < 1.0))
        throw std::invalid_argument("discount must be in [0,1)");
    for (const auto& u : users) {
        if (u.reward.low_rate() != u.channel.low_rate)
            throw std::invalid_argument("user reward model low_rate does not match its channel");
    }
    return DownlinkSystem(std::move(users), discount);
}

std::vector<Belief> DownlinkSystem::steady_initial() const {
    std::vector<Belief> out;
    out.reserve(users_.size());
    for (const auto& u : users_) out.push_back(steady_state(u.channel));
    return out;
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::whittle: return "whittle";
        case PolicyKind::greedy: return "greedy";
        case PolicyKind::random_uniform: return "random";
        case PolicyKind::no_feedback: return "nofb";
        case PolicyKind::optimal: return "optimal";
    }
    throw std::logic_error("unknown policy kind");
}

PolicyKind policy_from_name(const std::string& name) {
    if (name == "whittle") return PolicyKind::whittle;
    if (name == "greedy") return PolicyKind::greedy;
    if (name == "random") return PolicyKind::random_uniform;
    if (name == "nofb") return PolicyKind::no_feedback;
    if (name == "optimal") return PolicyKind::optimal;
    throw std::invalid_argument("unknown policy name: " + name);
}

SystemState transition(const DownlinkSystem& sys, const SystemState& state, int scheduled,
                       bool observed_high) {
    check_state(sys, state);
    if (scheduled < 0 || scheduled >= sys.size())
        throw std::invalid_argument("scheduled user index out of range");
    SystemState next(state.size());
    for (int i = 0; i < sys.size(); ++i) {
        next[static_cast<size_t>(i)] =
            i == scheduled ? feedback_update(sys.users()[static_cast<size_t>(i)].channel, observed_high)
                           : q_step(sys.users()[static_cast<size_t>(i)].channel,
                                    state[static_cast<size_t>(i)]);
    }
    return next;
}

int whittle_policy(const DownlinkSystem& sys, const SystemState& state) {
    check_state(sys, state);
    return argmax_user(sys.size(), [&](int i) {
        const auto& u = sys.users()[static_cast<size_t>(i)];
        return whittle_index(u.channel, u.reward, sys.discount(), state[static_cast<size_t>(i)]);
    });
}

int greedy_policy(const DownlinkSystem& sys, const SystemState& state) {
    check_state(sys, state);
    return argmax_user(sys.size(), [&](int i) { return state[static_cast<size_t>(i)]; });
}

int no_feedback_policy(const DownlinkSystem& sys, const SystemState& open_loop_beliefs) {
    check_state(sys, open_loop_beliefs);
    return argmax_user(sys.size(), [&](int i) {
        const auto& u = sys.users()[static_cast<size_t>(i)];
        return u.reward(open_loop_beliefs[static_cast<size_t>(i)]);
    });
}

HorizonValue optimal_finite_horizon(const DownlinkSystem& sys, const SystemState& state,
                                    int horizon, int horizon_cap) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (horizon > horizon_cap)
        throw std::invalid_argument("horizon exceeds the exact-DP cap; the outcome tree grows as 2^M");
    check_state(sys, state);
    ExactEvaluator eval(sys, state, horizon, PolicyKind::optimal);
    HorizonValue out;
    out.value = eval.value_at_horizon(horizon);
    out.first_action = eval.first_action(horizon);
    return out;
}

}  // namespace memsched
