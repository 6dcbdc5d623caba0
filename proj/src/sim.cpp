#include "memsched/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "memsched/belief_tree.hpp"
#include "memsched/parallel.hpp"
#include "memsched/rng.hpp"
#include "memsched/whittle.hpp"

namespace memsched {
namespace {

int default_cap(PolicyKind kind) { return kind == PolicyKind::optimal ? 14 : 20; }

// Convergence-horizon search shared by the table experiment: the smallest M
// with every policy's relative change below pct, else the cap.
struct ConvergedValues {
    double v_opt = 0.0, v_index = 0.0, v_greedy = 0.0, v_nofb = 0.0;
    int horizon = 0;
    bool converged = false;
};

ConvergedValues values_at_convergence(const DownlinkSystem& sys, const SystemState& init,
                                      double pct, int cap) {
    ExactEvaluator opt(sys, init, cap, PolicyKind::optimal);
    ExactEvaluator index(sys, init, cap, PolicyKind::whittle);
    ExactEvaluator greedy(sys, init, cap, PolicyKind::greedy);
    ExactEvaluator nofb(sys, init, cap, PolicyKind::no_feedback);
    ConvergedValues out;
    double prev[4] = {0.0, 0.0, 0.0, 0.0};
    for (int m = 1; m <= cap; ++m) {
        const double cur[4] = {opt.value_at_horizon(m), index.value_at_horizon(m),
                               greedy.value_at_horizon(m), nofb.value_at_horizon(m)};
        bool settled = m >= 2;
        for (int k = 0; k < 4 && settled; ++k)
            settled = std::abs(cur[k] - prev[k]) < pct * std::max(std::abs(cur[k]), 1e-300);
        out.v_opt = cur[0];
        out.v_index = cur[1];
        out.v_greedy = cur[2];
        out.v_nofb = cur[3];
        out.horizon = m;
        for (int k = 0; k < 4; ++k) prev[k] = cur[k];
        if (settled) {
            out.converged = true;
            break;
        }
    }
    return out;
}

}  // namespace

double evaluate_exact(const DownlinkSystem& sys, PolicyKind kind, const SystemState& state,
                      int horizon, int cap) {
    if (cap == 0) cap = default_cap(kind);
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (horizon > cap)
        throw std::invalid_argument("horizon exceeds the exact-evaluation cap; use Monte Carlo");
    ExactEvaluator eval(sys, state, horizon, kind);
    return eval.value_at_horizon(horizon);
}

MonteCarloEstimate evaluate_monte_carlo(const DownlinkSystem& sys, PolicyKind kind,
                                        const SystemState& state, const EvalConfig& config) {
    if (kind == PolicyKind::optimal)
        throw std::invalid_argument("Monte Carlo does not evaluate the optimal policy");
    const int n = sys.size();
    const int m = config.horizon;
    if (m < 1) throw std::invalid_argument("horizon must be >= 1");
    if (config.runs < 1) throw std::invalid_argument("runs must be >= 1");
    if (static_cast<int>(state.size()) != n)
        throw std::invalid_argument("belief vector length mismatch");
    const double beta = sys.discount();

    // Per-user (origin, age) tables over the run horizon; origin 0 = initial
    // belief, 1 = after high feedback, 2 = after low feedback.
    const int stride = m + 1;
    std::vector<std::vector<double>> belief_tab(static_cast<size_t>(n)),
        reward_tab(static_cast<size_t>(n)), windex_tab(static_cast<size_t>(n));
    for (int u = 0; u < n; ++u) {
        const auto& user = sys.users()[static_cast<size_t>(u)];
        auto& bt = belief_tab[static_cast<size_t>(u)];
        auto& rt = reward_tab[static_cast<size_t>(u)];
        bt.resize(static_cast<size_t>(3 * stride));
        rt.resize(static_cast<size_t>(3 * stride));
        if (kind == PolicyKind::whittle)
            windex_tab[static_cast<size_t>(u)].resize(static_cast<size_t>(3 * stride));
        for (int origin = 0; origin < 3; ++origin) {
            const double base = origin == 0   ? state[static_cast<size_t>(u)]
                                : origin == 1 ? user.channel.stay_high
                                              : user.channel.low_to_high;
            for (int age = 0; age < stride; ++age) {
                const size_t at = static_cast<size_t>(origin * stride + age);
                bt[at] = q_iterate(user.channel, base, age);
                rt[at] = user.reward(bt[at]);
                if (kind == PolicyKind::whittle)
                    windex_tab[static_cast<size_t>(u)][at] =
                        whittle_index(user.channel, user.reward, beta, bt[at]);
            }
        }
    }

    std::vector<double> run_value(static_cast<size_t>(config.runs), 0.0);
    for (int run = 0; run < config.runs; ++run) {
        std::vector<SplitMix64> chains;
        chains.reserve(static_cast<size_t>(n));
        for (int u = 0; u < n; ++u)
            chains.emplace_back(derive_stream(config.seed, static_cast<std::uint64_t>(run) + 1,
                                              static_cast<std::uint64_t>(u) + 1));
        SplitMix64 picker(derive_stream(config.seed, static_cast<std::uint64_t>(run) + 1, 0));
        std::vector<int> origin(static_cast<size_t>(n), 0), age(static_cast<size_t>(n), 0);
        std::vector<bool> high(static_cast<size_t>(n));
        for (int u = 0; u < n; ++u)
            high[static_cast<size_t>(u)] = uniform01(chains[static_cast<size_t>(u)]) <
                                           state[static_cast<size_t>(u)];
        double acc = 0.0;
        double disc = 1.0;
        for (int t = 0; t < m; ++t) {
            int pick = 0;
            if (kind == PolicyKind::random_uniform) {
                pick = uniform_int(picker, n);
            } else {
                double best = -1.0;
                for (int u = 0; u < n; ++u) {
                    const size_t at = kind == PolicyKind::no_feedback
                                          ? static_cast<size_t>(t)
                                          : static_cast<size_t>(origin[static_cast<size_t>(u)] *
                                                                    stride +
                                                                age[static_cast<size_t>(u)]);
                    const double s = kind == PolicyKind::whittle
                                         ? windex_tab[static_cast<size_t>(u)][at]
                                     : kind == PolicyKind::greedy
                                         ? belief_tab[static_cast<size_t>(u)][at]
                                         : reward_tab[static_cast<size_t>(u)][at];
                    if (s > best) {
                        best = s;
                        pick = u;
                    }
                }
            }
            const size_t pick_at =
                kind == PolicyKind::no_feedback
                    ? static_cast<size_t>(t)
                    : static_cast<size_t>(origin[static_cast<size_t>(pick)] * stride +
                                          age[static_cast<size_t>(pick)]);
            acc += disc * reward_tab[static_cast<size_t>(pick)][pick_at];
            disc *= beta;
            // End of slot: feedback to the scheduled user, then every chain
            // advances one step. Each user consumes exactly one draw per slot
            // regardless of the policy.
            origin[static_cast<size_t>(pick)] = high[static_cast<size_t>(pick)] ? 1 : 2;
            age[static_cast<size_t>(pick)] = 0;
            for (int u = 0; u < n; ++u) {
                if (u != pick) ++age[static_cast<size_t>(u)];
                const auto& ch = sys.users()[static_cast<size_t>(u)].channel;
                const double stay = high[static_cast<size_t>(u)] ? ch.stay_high : ch.low_to_high;
                high[static_cast<size_t>(u)] = uniform01(chains[static_cast<size_t>(u)]) < stay;
            }
        }
        run_value[static_cast<size_t>(run)] = acc;
    }

    MonteCarloEstimate est;
    for (double v : run_value) est.mean += v;
    est.mean /= config.runs;
    if (config.runs > 1) {
        double ss = 0.0;
        for (double v : run_value) ss += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(ss / (static_cast<double>(config.runs) *
                                        (static_cast<double>(config.runs) - 1.0)));
    }
    return est;
}

std::optional<double> pct_gain(double v_opt, double v_index, double v_nofb) {
    if (!(v_opt > v_nofb)) return std::nullopt;
    return 100.0 * (v_index - v_nofb) / (v_opt - v_nofb);
}

std::vector<HorizonSweepRow> horizon_sweep(const DownlinkSystem& sys, const SystemState& state,
                                           int max_horizon) {
    if (max_horizon < 1) throw std::invalid_argument("max_horizon must be >= 1");
    if (max_horizon > 14)
        throw std::invalid_argument("horizon sweep exceeds the exact-DP cap of 14");
    ExactEvaluator opt(sys, state, max_horizon, PolicyKind::optimal);
    ExactEvaluator index(sys, state, max_horizon, PolicyKind::whittle);
    std::vector<HorizonSweepRow> rows;
    rows.reserve(static_cast<size_t>(max_horizon));
    for (int m = 1; m <= max_horizon; ++m)
        rows.push_back({m, opt.value_at_horizon(m), index.value_at_horizon(m)});
    return rows;
}

std::vector<MemorySweepRow> memory_sweep(int n_users, std::span<const double> stay_high_values,
                                         double low_rate, double discount, int horizon,
                                         int threads) {
    for (double p : stay_high_values)
        if (!(p >= 0.5 && p < 1.0))
            throw std::invalid_argument("memory sweep stay_high values must lie in [0.5, 1)");
    std::vector<MemorySweepRow> rows(stay_high_values.size());
    parallel_for(static_cast<int>(stay_high_values.size()), threads, [&](int i) {
        const double p = stay_high_values[static_cast<size_t>(i)];
        const MarkovChannel ch = MarkovChannel::validated(p, 1.0 - p, low_rate);
        const RewardModel model = RewardModel::default_experiment(low_rate);
        std::vector<UserModel> users(static_cast<size_t>(n_users), UserModel{ch, model});
        const DownlinkSystem sys = DownlinkSystem::validated(std::move(users), discount);
        const SystemState init = sys.steady_initial();
        MemorySweepRow row;
        row.stay_high = p;
        row.v_opt = evaluate_exact(sys, PolicyKind::optimal, init, horizon);
        row.v_index = evaluate_exact(sys, PolicyKind::whittle, init, horizon);
        row.v_nofb = evaluate_exact(sys, PolicyKind::no_feedback, init, horizon);
        rows[static_cast<size_t>(i)] = row;
    });
    return rows;
}

std::vector<ExperimentResult> random_instance_table(const TableSpec& spec) {
    if (spec.count < 1) throw std::invalid_argument("table needs at least one instance");
    if (spec.n_min < 1 || spec.n_max < spec.n_min)
        throw std::invalid_argument("bad user-count range");
    if (!(spec.beta_min >= 0.0 && spec.beta_max < 1.0 && spec.beta_min <= spec.beta_max))
        throw std::invalid_argument("bad discount range");
    std::vector<ExperimentResult> rows(static_cast<size_t>(spec.count));
    parallel_for(spec.count, spec.threads, [&](int i) {
        SplitMix64 g(derive_stream(spec.seed, static_cast<std::uint64_t>(i) + 1, 0));
        const int n = spec.n_min + uniform_int(g, spec.n_max - spec.n_min + 1);
        const double beta = spec.beta_min + (spec.beta_max - spec.beta_min) * uniform01(g);
        std::vector<UserModel> users;
        users.reserve(static_cast<size_t>(n));
        const RewardModel model = RewardModel::default_experiment(spec.low_rate);
        for (int u = 0; u < n; ++u) {
            const double p = uniform01(g);
            const double r = uniform01(g);
            users.push_back(UserModel{MarkovChannel::validated(p, r, spec.low_rate), model});
        }
        const DownlinkSystem sys = DownlinkSystem::validated(std::move(users), beta);
        const SystemState init = sys.steady_initial();
        const ConvergedValues cv =
            values_at_convergence(sys, init, spec.convergence_pct, spec.horizon_cap);
        ExperimentResult& row = rows[static_cast<size_t>(i)];
        row.n_users = n;
        row.discount = beta;
        row.v_opt = cv.v_opt;
        row.v_index = cv.v_index;
        row.v_greedy = cv.v_greedy;
        row.v_nofb = cv.v_nofb;
        row.gain_pct = pct_gain(cv.v_opt, cv.v_index, cv.v_nofb);
        row.horizon_used = cv.horizon;
        row.converged = cv.converged;
        row.seed = derive_stream(spec.seed, static_cast<std::uint64_t>(i) + 1, 0);
    });
    return rows;
}

}  // namespace memsched
