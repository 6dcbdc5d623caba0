#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memsched/policies.hpp"
#include "memsched/sim.hpp"

namespace memsched {

// One user entry from a run config. The reward model is either a named
// family or an explicit list of extra payoff pairs (the conservative and
// aggressive pairs are always present).
struct UserSpec {
    double stay_high = 0.5;
    double low_to_high = 0.5;
    double low_rate = 0.2;
    std::string reward_model = "default";  // default | no-estimation | full-csi
    std::vector<PayoffPair> reward_pairs;  // extra pairs; overrides reward_model

    UserModel build() const;
};

struct RunConfig {
    std::string experiment = "validate";
    std::vector<UserSpec> users;
    double discount = 0.9;
    std::vector<double> initial_beliefs;  // empty -> steady state
    std::vector<std::string> policies = {"whittle", "greedy", "nofb"};
    EvalConfig eval;

    // index-curve
    int curve_points = 1001;
    int curve_user = 0;
    // threshold
    double omega_min = 0.0;  // 0 -> just above low_rate
    double omega_max = 0.0;  // 0 -> just below 1
    int omega_points = 25;
    int threshold_user = 0;
    // horizon-sweep
    int sweep_max_horizon = 10;
    // memory-sweep
    int memory_users = 5;
    std::vector<double> memory_p_values;  // empty -> {0.5, 0.6, 0.7, 0.8, 0.9}
    double memory_low_rate = 0.2;
    int memory_horizon = 10;
    // table
    TableSpec table;
    // trace
    int trace_user = 0;
    double trace_start = 0.3;
    int trace_horizon = 20;

    std::string output_path = ".";

    // Parses a JSON config. Unknown keys are rejected with their JSON path;
    // all module-level invariants are validated before anything runs.
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);

    DownlinkSystem build_system() const;
    SystemState build_initial(const DownlinkSystem& sys) const;
};

}  // namespace memsched
