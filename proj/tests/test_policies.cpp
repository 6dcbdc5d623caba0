#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "memsched/belief_tree.hpp"
#include "memsched/rng.hpp"
#include "memsched/sim.hpp"
#include "memsched/whittle.hpp"

using namespace memsched;

namespace {

DownlinkSystem two_user_mirror(double beta) {
    const auto model = RewardModel::default_experiment(0.2);
    std::vector<UserModel> users{
        UserModel{MarkovChannel::validated(0.8, 0.2, 0.2), model},
        UserModel{MarkovChannel::validated(0.2, 0.8, 0.2), model},
    };
    return DownlinkSystem::validated(std::move(users), beta);
}

DownlinkSystem identical(int n, double p, double r, double beta) {
    const auto model = RewardModel::default_experiment(0.2);
    std::vector<UserModel> users(static_cast<size_t>(n),
                                 UserModel{MarkovChannel::validated(p, r, 0.2), model});
    return DownlinkSystem::validated(std::move(users), beta);
}

// Test-side oracle: plain recursion over raw belief vectors, no dedup or
// encoding. Exponential; keep horizons small.
double brute_policy_value(const DownlinkSystem& sys, const SystemState& state, int m,
                          PolicyKind kind) {
    if (m == 0) return 0.0;
    auto branch = [&](int act) {
        const auto& u = sys.users()[static_cast<size_t>(act)];
        const double pi = state[static_cast<size_t>(act)];
        const double up = brute_policy_value(sys, transition(sys, state, act, true), m - 1, kind);
        const double dn = brute_policy_value(sys, transition(sys, state, act, false), m - 1, kind);
        return u.reward(pi) + sys.discount() * (pi * up + (1.0 - pi) * dn);
    };
    switch (kind) {
        case PolicyKind::optimal: {
            double best = branch(0);
            for (int a = 1; a < sys.size(); ++a) best = std::max(best, branch(a));
            return best;
        }
        case PolicyKind::random_uniform: {
            double sum = 0.0;
            for (int a = 0; a < sys.size(); ++a) sum += branch(a);
            return sum / sys.size();
        }
        case PolicyKind::whittle:
            return branch(whittle_policy(sys, state));
        case PolicyKind::greedy:
            return branch(greedy_policy(sys, state));
        default:
            throw std::logic_error("unsupported brute kind");
    }
}

}  // namespace

TEST_CASE("one-slot transition") {
    const auto sys = two_user_mirror(0.6);
    const SystemState state{0.3, 0.6};
    const auto high = transition(sys, state, 0, true);
    CHECK(high[0] == 0.8);
    CHECK(high[1] == doctest::Approx(0.6 * 0.2 + 0.4 * 0.8).epsilon(1e-15));
    const auto one = DownlinkSystem::validated(
        {UserModel{MarkovChannel::validated(0.8, 0.2, 0.2), RewardModel::default_experiment(0.2)}},
        0.6);
    CHECK(transition(one, SystemState{0.4}, 0, false)[0] == 0.2);
    // An i.i.d. system lands on the steady state after one slot from anywhere.
    const auto iid = identical(3, 0.5, 0.5, 0.6);
    const auto next = transition(iid, SystemState{0.1, 0.6, 0.9}, 1, true);
    for (double b : next) CHECK(b == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("policy argmax rules") {
    const auto sys = identical(2, 0.8, 0.2, 0.9);
    CHECK(whittle_policy(sys, SystemState{0.3, 0.7}) == 1);
    CHECK(greedy_policy(sys, SystemState{0.3, 0.7}) == 1);
    CHECK(whittle_policy(sys, SystemState{0.4, 0.4}) == 0);  // exact tie -> lowest index
    CHECK(greedy_policy(sys, SystemState{0.4, 0.4}) == 0);
    const auto three = identical(3, 0.8, 0.2, 0.9);
    CHECK(greedy_policy(three, SystemState{0.2, 0.9, 0.5}) == 1);
    const auto one = identical(1, 0.8, 0.2, 0.9);
    CHECK(whittle_policy(one, SystemState{0.42}) == 0);
}

TEST_CASE("no-feedback rule ranks open-loop rewards") {
    const auto sys = two_user_mirror(0.6);
    // Slot 0 with distinct initial beliefs: plain reward argmax.
    CHECK(no_feedback_policy(sys, SystemState{0.9, 0.3}) == 0);
    CHECK(no_feedback_policy(sys, SystemState{0.1, 0.8}) == 1);
    // Identical i.i.d. users: open-loop beliefs coincide from slot 1 on.
    const auto iid = identical(3, 0.5, 0.5, 0.6);
    SystemState open{0.9, 0.2, 0.6};
    for (int u = 0; u < 3; ++u)
        open[static_cast<size_t>(u)] =
            q_step(iid.users()[static_cast<size_t>(u)].channel, open[static_cast<size_t>(u)]);
    CHECK(no_feedback_policy(iid, open) == 0);
}

TEST_CASE("exact evaluator against the brute-force tree") {
    SplitMix64 g(311);
    for (int rep = 0; rep < 16; ++rep) {
        const int n = 2 + (rep % 2);
        std::vector<UserModel> users;
        for (int u = 0; u < n; ++u)
            users.push_back(UserModel{MarkovChannel::validated(uniform01(g), uniform01(g), 0.2),
                                      RewardModel::default_experiment(0.2)});
        const DownlinkSystem sys = DownlinkSystem::validated(users, 0.8 * uniform01(g));
        SystemState init(static_cast<size_t>(n));
        for (auto& b : init) b = uniform01(g);
        const int m = 2 + uniform_int(g, n == 2 ? 5 : 3);
        for (PolicyKind kind : {PolicyKind::optimal, PolicyKind::whittle, PolicyKind::greedy,
                                PolicyKind::random_uniform}) {
            const double brute = brute_policy_value(sys, init, m, kind);
            const double fast = evaluate_exact(sys, kind, init, m);
            CHECK(std::abs(brute - fast) <= 1e-12);
        }
    }
}

TEST_CASE("optimal finite horizon") {
    SUBCASE("single slot is the myopic argmax") {
        const auto sys = two_user_mirror(0.6);
        const SystemState init{0.3, 0.6};
        const auto hv = optimal_finite_horizon(sys, init, 1);
        const double r0 = sys.users()[0].reward(0.3);
        const double r1 = sys.users()[1].reward(0.6);
        CHECK(hv.value == doctest::Approx(std::max(r0, r1)).epsilon(1e-15));
        CHECK(hv.first_action == (r1 > r0 ? 1 : 0));
    }
    SUBCASE("single user always schedules user 0") {
        const auto one = identical(1, 0.8, 0.2, 0.9);
        const SystemState init{0.4};
        const auto hv = optimal_finite_horizon(one, init, 6);
        CHECK(hv.first_action == 0);
        CHECK(hv.value ==
              doctest::Approx(brute_policy_value(one, init, 6, PolicyKind::whittle))
                  .epsilon(1e-12));
    }
    SUBCASE("dominates every policy on the mirror instance") {
        const auto sys = two_user_mirror(0.6);
        const SystemState init = sys.steady_initial();
        const double v_opt = optimal_finite_horizon(sys, init, 8).value;
        for (PolicyKind kind : {PolicyKind::whittle, PolicyKind::greedy,
                                PolicyKind::random_uniform, PolicyKind::no_feedback})
            CHECK(evaluate_exact(sys, kind, init, 8) <= v_opt + 1e-10);
    }
    SUBCASE("horizon above the cap is rejected") {
        const auto sys = two_user_mirror(0.6);
        CHECK_THROWS_AS(optimal_finite_horizon(sys, sys.steady_initial(), 15),
                        std::invalid_argument);
    }
}

TEST_CASE("identical channels: whittle and greedy agree in value, not just decisions") {
    for (double p : {0.85, 0.4}) {
        const auto sys = identical(4, p, 1.0 - p, 0.7);
        SystemState init{0.15, 0.55, 0.8, 0.35};
        const double vw = evaluate_exact(sys, PolicyKind::whittle, init, 9);
        const double vg = evaluate_exact(sys, PolicyKind::greedy, init, 9);
        CHECK(std::abs(vw - vg) <= 1e-12);
    }
}

TEST_CASE("decisions depend only on index ordering (label permutation)") {
    const auto model = RewardModel::default_experiment(0.2);
    std::vector<UserModel> users{
        UserModel{MarkovChannel::validated(0.8, 0.2, 0.2), model},
        UserModel{MarkovChannel::validated(0.6, 0.3, 0.2), model},
        UserModel{MarkovChannel::validated(0.3, 0.7, 0.2), model},
    };
    const auto sys = DownlinkSystem::validated(users, 0.7);
    std::vector<UserModel> rev(users.rbegin(), users.rend());
    const auto sys_rev = DownlinkSystem::validated(rev, 0.7);
    SplitMix64 g(5150);
    for (int rep = 0; rep < 2000; ++rep) {
        SystemState state{uniform01(g), uniform01(g), uniform01(g)};
        SystemState state_rev(state.rbegin(), state.rend());
        const int a = whittle_policy(sys, state);
        const int b = whittle_policy(sys_rev, state_rev);
        CHECK(a == 2 - b);
    }
}
