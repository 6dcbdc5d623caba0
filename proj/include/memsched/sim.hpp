#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "memsched/policies.hpp"

namespace memsched {

struct EvalConfig {
    enum class Mode { exact, monte_carlo };
    int horizon = 10;
    Mode mode = Mode::exact;
    int runs = 10000;          // monte carlo
    std::uint64_t seed = 0;    // monte carlo
    double convergence_pct = 0.01;
};

// Exact expected discounted reward of a policy over `horizon` slots, by
// forward recursion over the feedback tree with belief-vector dedup.
// cap = 0 selects the default cap: 14 for the optimal policy (every action
// branches), 20 otherwise.
double evaluate_exact(const DownlinkSystem& sys, PolicyKind kind, const SystemState& state,
                      int horizon, int cap = 0);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Seeded Monte Carlo estimate: channel states sampled from the initial
// beliefs then evolved by the chains; per-(run, user) streams are pre-split
// from the seed. Reproducible for a fixed seed. The optimal policy is not
// supported here (use evaluate_exact).
MonteCarloEstimate evaluate_monte_carlo(const DownlinkSystem& sys, PolicyKind kind,
                                        const SystemState& state, const EvalConfig& config);

// (v_index - v_nofb) / (v_opt - v_nofb) * 100. Undefined (nullopt) unless
// v_opt > v_nofb.
std::optional<double> pct_gain(double v_opt, double v_index, double v_nofb);

struct HorizonSweepRow {
    int horizon = 0;
    double v_opt = 0.0;
    double v_index = 0.0;
};

// Optimal vs index-policy values for every horizon 1..max_horizon.
std::vector<HorizonSweepRow> horizon_sweep(const DownlinkSystem& sys, const SystemState& state,
                                           int max_horizon);

struct MemorySweepRow {
    double stay_high = 0.0;
    double v_opt = 0.0;
    double v_index = 0.0;
    double v_nofb = 0.0;
};

// Identical-user sweep over channel memory: for each p in stay_high_values,
// N users with (p, 1-p) channels (constant steady state 1/2), steady initial
// beliefs, exact evaluation at `horizon`.
std::vector<MemorySweepRow> memory_sweep(int n_users, std::span<const double> stay_high_values,
                                         double low_rate, double discount, int horizon,
                                         int threads = 1);

struct ExperimentResult {
    int n_users = 0;
    double discount = 0.0;
    double v_opt = 0.0;
    double v_index = 0.0;
    double v_greedy = 0.0;
    double v_nofb = 0.0;
    std::optional<double> gain_pct;
    int horizon_used = 0;
    bool converged = false;
    std::uint64_t seed = 0;
};

struct TableSpec {
    int count = 7;
    int n_min = 4;
    int n_max = 5;
    double beta_min = 0.45;
    double beta_max = 0.67;
    double low_rate = 0.2;
    std::uint64_t seed = 0;
    double convergence_pct = 0.01;
    int horizon_cap = 14;
    int threads = 1;
};

// Random-instance comparison: per row, draw per-user (stay_high, low_to_high)
// uniform on (0,1) and the discount uniform in [beta_min, beta_max]; evaluate
// every policy exactly at the convergence horizon -- the smallest M at which
// each policy's value changes by less than convergence_pct relatively -- and
// report the captured-gain percentage. Deterministic per (seed, row).
std::vector<ExperimentResult> random_instance_table(const TableSpec& spec);

}  // namespace memsched
