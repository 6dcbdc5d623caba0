#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "memsched/subsidy.hpp"

using namespace memsched;

namespace {

SubsidyProblem make(double p, double r, double delta, double beta, double omega,
                    bool plain_model = false) {
    const auto ch = MarkovChannel::validated(p, r, delta);
    return SubsidyProblem::validated(ch,
                                     plain_model ? RewardModel::no_estimation(delta)
                                                 : RewardModel::default_experiment(delta),
                                     beta, omega);
}

}  // namespace

TEST_CASE("threshold classification cases") {
    CHECK(classify_threshold(make(0.8, 0.2, 0.2, 0.9, 1.2)).kind ==
          ThresholdClass::Kind::always_idle);
    CHECK(classify_threshold(make(0.8, 0.2, 0.2, 0.9, 0.15)).kind ==
          ThresholdClass::Kind::always_active);
    const auto cls = classify_threshold(make(0.8, 0.2, 0.2, 0.9, 0.6));
    CHECK(cls.kind == ThresholdClass::Kind::interior);
    CHECK(cls.threshold > 0.0);
    CHECK(cls.threshold < 1.0);
}

TEST_CASE("always-active value") {
    // Zero discount keeps only the first slot.
    const auto myopic = make(0.8, 0.2, 0.2, 0.0, 0.0);
    CHECK(always_active_value(myopic, 0.37) == doctest::Approx(myopic.reward(0.37)).epsilon(1e-15));
    // An i.i.d. channel pins the belief, so the value is the plain geometric sum.
    const auto iid = make(0.5, 0.5, 0.2, 0.5, 0.0, true);
    CHECK(always_active_value(iid, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    // A hugely negative subsidy forces the oracle to transmit everywhere.
    const auto prob = make(0.8, 0.2, 0.2, 0.9, -25.0);
    const ValueTable table = value_iteration(prob);
    const double oracle = table.values()[static_cast<size_t>(table.exact_index(0.2))];
    CHECK(std::abs(always_active_value(prob, 0.2) - oracle) <= 1e-6);
}

TEST_CASE("anchor closed forms per branch") {
    SUBCASE("always idle") {
        const auto prob = make(0.8, 0.2, 0.2, 0.6, 1.2);
        const auto a = anchor_values(prob, ThresholdClass::always_idle());
        CHECK(a.after_high == doctest::Approx(3.0).epsilon(1e-15));
        CHECK(a.after_low == doctest::Approx(3.0).epsilon(1e-15));
    }
    SUBCASE("always active matches the never-idle values") {
        const auto prob = make(0.8, 0.2, 0.2, 0.9, 0.1);
        const auto a = anchor_values(prob, ThresholdClass::always_active());
        CHECK(a.after_high ==
              doctest::Approx(always_active_value(prob, 0.8)).epsilon(1e-12));
        CHECK(a.after_low == doctest::Approx(always_active_value(prob, 0.2)).epsilon(1e-12));
    }
    SUBCASE("interior agrees with value iteration on both correlation signs") {
        for (const auto& prob : {make(0.8, 0.2, 0.2, 0.9, 0.6), make(0.2, 0.8, 0.2, 0.9, 0.6),
                                 make(0.7, 0.4, 0.2, 0.5, 0.45), make(0.35, 0.6, 0.2, 0.5, 0.45)}) {
            const auto cls = classify_threshold(prob);
            REQUIRE(cls.kind == ThresholdClass::Kind::interior);
            const auto a = anchor_values(prob, cls);
            const ValueTable table = value_iteration(prob);
            const double vp =
                table.values()[static_cast<size_t>(table.exact_index(prob.channel.stay_high))];
            const double vr =
                table.values()[static_cast<size_t>(table.exact_index(prob.channel.low_to_high))];
            CHECK(std::abs(a.after_high - vp) <= 1e-6);
            CHECK(std::abs(a.after_low - vr) <= 1e-6);
            // Idling forever is always feasible, so no anchor sits below the
            // pure-subsidy value.
            const double floor = prob.subsidy / (1.0 - prob.discount);
            CHECK(a.after_high >= floor - 1e-9);
            CHECK(a.after_low >= floor - 1e-9);
        }
    }
    SUBCASE("inconsistent pairs are rejected") {
        const auto prob = make(0.8, 0.2, 0.2, 0.9, 0.6);
        CHECK_THROWS_AS(anchor_values(prob, ThresholdClass::interior(0.95)), std::logic_error);
        CHECK_THROWS_AS(anchor_values(prob, ThresholdClass::always_idle()), std::logic_error);
        CHECK_THROWS_AS(anchor_values(prob, ThresholdClass::always_active()), std::logic_error);
    }
}

TEST_CASE("all-active anchors reduce to drift-trajectory sums when the reward is linear") {
    // With a reward that is linear on [min(p,r), max(p,r)] the expectation
    // over feedback commutes with R, so the never-idle value collapses to
    // sum_t beta^t R(Q^t(start)). The closed 2x2 form must reproduce that; a
    // kinked reward must sit strictly above it (Jensen gap).
    const auto ch = MarkovChannel::validated(0.8, 0.2, 0.2);
    const auto linear = RewardModel::no_estimation(0.2);  // max{0.2, pi}: linear on [0.2, 0.8]
    const double beta = 0.9;
    auto drift_sum = [&](const RewardModel& model, double start) {
        double acc = 0.0, disc = 1.0;
        for (long t = 0; t < 400; ++t) {
            acc += disc * model(q_iterate(ch, start, t));
            disc *= beta;
        }
        return acc;
    };
    const auto prob = SubsidyProblem::validated(ch, linear, beta, 0.0);
    CHECK(always_active_value(prob, 0.2) == doctest::Approx(drift_sum(linear, 0.2)).epsilon(1e-10));
    CHECK(always_active_value(prob, 0.8) == doctest::Approx(drift_sum(linear, 0.8)).epsilon(1e-10));

    const auto kinked = RewardModel::default_experiment(0.2);  // kink at 0.5, inside (0.2, 0.8)
    const auto kprob = SubsidyProblem::validated(ch, kinked, beta, 0.0);
    CHECK(always_active_value(kprob, 0.2) > drift_sum(kinked, 0.2) + 1e-3);
}

TEST_CASE("value_at reproduces the oracle everywhere") {
    const auto prob = make(0.8, 0.2, 0.2, 0.9, 0.6);
    const auto cls = classify_threshold(prob);
    const auto anchors = anchor_values(prob, cls);
    for (int i = 0; i <= 20; ++i) {
        const double pi = i / 20.0;
        const std::vector<Belief> extra{pi};
        const ValueTable table = value_iteration(prob, 1001, 200000, 1e-9, extra);
        CHECK(std::abs(value_at(prob, cls, anchors, pi) - table.at(pi)) <= 1e-6);
    }
    // Degenerate classes have closed values.
    const auto idle = make(0.8, 0.2, 0.2, 0.6, 1.2);
    CHECK(value_at(idle, ThresholdClass::always_idle(),
                   anchor_values(idle, ThresholdClass::always_idle()), 0.77) ==
          doctest::Approx(3.0));
    const auto active = make(0.8, 0.2, 0.2, 0.9, 0.1);
    const auto aa = anchor_values(active, ThresholdClass::always_active());
    CHECK(value_at(active, ThresholdClass::always_active(), aa, 0.3) ==
          doctest::Approx(active.reward(0.3) +
                          0.9 * (0.3 * aa.after_high + 0.7 * aa.after_low)));
}

TEST_CASE("value iteration basics") {
    SUBCASE("zero discount is the myopic maximum") {
        const auto prob = make(0.8, 0.2, 0.2, 0.0, 0.4);
        const ValueTable table = value_iteration(prob, 101);
        for (size_t i = 0; i < table.grid().size(); ++i)
            CHECK(table.values()[i] ==
                  doctest::Approx(std::max(0.4, prob.reward(table.grid()[i]))).epsilon(1e-12));
    }
    SUBCASE("always idle is constant") {
        const auto prob = make(0.8, 0.2, 0.2, 0.6, 1.2);
        const ValueTable table = value_iteration(prob, 101);
        for (double v : table.values()) CHECK(v == doctest::Approx(3.0).epsilon(1e-9));
    }
    SUBCASE("grid size precondition") {
        CHECK_THROWS_AS(value_iteration(make(0.8, 0.2, 0.2, 0.9, 0.5), 50),
                        std::invalid_argument);
    }
}

TEST_CASE("threshold solver boundary behavior") {
    const double tiny = solve_threshold(make(0.8, 0.2, 0.2, 0.9, 0.205)).threshold;
    const double mid = solve_threshold(make(0.8, 0.2, 0.2, 0.9, 0.5)).threshold;
    const double big = solve_threshold(make(0.8, 0.2, 0.2, 0.9, 0.995)).threshold;
    CHECK(tiny < 0.1);
    CHECK(tiny < mid);
    CHECK(mid < big);
    CHECK(big > 0.9);
    CHECK_THROWS_AS(solve_threshold(make(0.8, 0.2, 0.2, 0.9, 0.1)), std::invalid_argument);
}
