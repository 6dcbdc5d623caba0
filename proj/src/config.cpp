#include "memsched/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace memsched {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + where);
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw std::invalid_argument(std::string("config: \"") + key + "\" must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw std::invalid_argument(std::string("config: \"") + key + "\" must be an integer");
    return obj[key].get<int>();
}

std::string get_str(const json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_string())
        throw std::invalid_argument(std::string("config: \"") + key + "\" must be a string");
    return obj[key].get<std::string>();
}

UserSpec parse_user(const json& u, const std::string& where) {
    if (!u.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    reject_unknown_keys(u, {"p", "r", "delta", "reward_model", "reward_pairs"}, where);
    UserSpec spec;
    if (!u.contains("p") || !u.contains("r"))
        throw std::invalid_argument("config: " + where + " needs \"p\" and \"r\"");
    spec.stay_high = get_num(u, "p", 0.0);
    spec.low_to_high = get_num(u, "r", 0.0);
    spec.low_rate = get_num(u, "delta", 0.2);
    spec.reward_model = get_str(u, "reward_model", "default");
    if (u.contains("reward_pairs")) {
        if (!u["reward_pairs"].is_array())
            throw std::invalid_argument("config: " + where + ".reward_pairs must be an array");
        for (const auto& pr : u["reward_pairs"]) {
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number() || !pr[1].is_number())
                throw std::invalid_argument("config: " + where +
                                            ".reward_pairs entries must be [rate_high, rate_low]");
            spec.reward_pairs.push_back(PayoffPair{pr[0].get<double>(), pr[1].get<double>()});
        }
        spec.reward_model = "pairs";
    }
    return spec;
}

}  // namespace

UserModel UserSpec::build() const {
    const MarkovChannel ch = MarkovChannel::validated(stay_high, low_to_high, low_rate);
    if (reward_model == "pairs")
        return UserModel{ch, RewardModel::estimation_family(low_rate, reward_pairs)};
    if (reward_model == "default") return UserModel{ch, RewardModel::default_experiment(low_rate)};
    if (reward_model == "no-estimation") return UserModel{ch, RewardModel::no_estimation(low_rate)};
    if (reward_model == "full-csi") return UserModel{ch, RewardModel::full_csi(low_rate)};
    throw std::invalid_argument("config: unknown reward_model \"" + reward_model + "\"");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
    reject_unknown_keys(root,
                        {"experiment", "users", "beta", "initial_beliefs", "policies", "eval",
                         "index_curve", "threshold", "horizon_sweep", "memory_sweep", "table",
                         "trace", "output_path"},
                        "top level");
    RunConfig cfg;
    cfg.experiment = get_str(root, "experiment", cfg.experiment);
    cfg.discount = get_num(root, "beta", cfg.discount);
    cfg.output_path = get_str(root, "output_path", cfg.output_path);

    if (root.contains("users")) {
        if (!root["users"].is_array())
            throw std::invalid_argument("config: \"users\" must be an array");
        int idx = 0;
        for (const auto& u : root["users"])
            cfg.users.push_back(parse_user(u, "users[" + std::to_string(idx++) + "]"));
    }
    if (root.contains("initial_beliefs")) {
        const auto& ib = root["initial_beliefs"];
        if (ib.is_string()) {
            if (ib.get<std::string>() != "steady")
                throw std::invalid_argument("config: initial_beliefs string must be \"steady\"");
        } else if (ib.is_array()) {
            for (const auto& b : ib) {
                if (!b.is_number())
                    throw std::invalid_argument("config: initial_beliefs must hold numbers");
                cfg.initial_beliefs.push_back(b.get<double>());
            }
        } else {
            throw std::invalid_argument("config: initial_beliefs must be \"steady\" or an array");
        }
    }
    if (root.contains("policies")) {
        if (!root["policies"].is_array())
            throw std::invalid_argument("config: \"policies\" must be an array");
        cfg.policies.clear();
        for (const auto& p : root["policies"]) {
            if (!p.is_string()) throw std::invalid_argument("config: policy names must be strings");
            policy_from_name(p.get<std::string>());  // validates
            cfg.policies.push_back(p.get<std::string>());
        }
    }
    if (root.contains("eval")) {
        const auto& e = root["eval"];
        reject_unknown_keys(e, {"horizon", "mode", "runs", "seed", "convergence_pct"}, "eval");
        cfg.eval.horizon = get_int(e, "horizon", cfg.eval.horizon);
        const std::string mode = get_str(e, "mode", "exact");
        if (mode == "exact")
            cfg.eval.mode = EvalConfig::Mode::exact;
        else if (mode == "monte-carlo")
            cfg.eval.mode = EvalConfig::Mode::monte_carlo;
        else
            throw std::invalid_argument("config: eval.mode must be \"exact\" or \"monte-carlo\"");
        cfg.eval.runs = get_int(e, "runs", cfg.eval.runs);
        if (e.contains("seed")) cfg.eval.seed = e["seed"].get<std::uint64_t>();
        cfg.eval.convergence_pct = get_num(e, "convergence_pct", cfg.eval.convergence_pct);
    }
    if (root.contains("index_curve")) {
        const auto& c = root["index_curve"];
        reject_unknown_keys(c, {"points", "user"}, "index_curve");
        cfg.curve_points = get_int(c, "points", cfg.curve_points);
        cfg.curve_user = get_int(c, "user", cfg.curve_user);
    }
    if (root.contains("threshold")) {
        const auto& c = root["threshold"];
        reject_unknown_keys(c, {"omega_min", "omega_max", "points", "user"}, "threshold");
        cfg.omega_min = get_num(c, "omega_min", cfg.omega_min);
        cfg.omega_max = get_num(c, "omega_max", cfg.omega_max);
        cfg.omega_points = get_int(c, "points", cfg.omega_points);
        cfg.threshold_user = get_int(c, "user", cfg.threshold_user);
    }
    if (root.contains("horizon_sweep")) {
        const auto& c = root["horizon_sweep"];
        reject_unknown_keys(c, {"max_horizon"}, "horizon_sweep");
        cfg.sweep_max_horizon = get_int(c, "max_horizon", cfg.sweep_max_horizon);
    }
    if (root.contains("memory_sweep")) {
        const auto& c = root["memory_sweep"];
        reject_unknown_keys(c, {"users", "p_values", "delta", "horizon"}, "memory_sweep");
        cfg.memory_users = get_int(c, "users", cfg.memory_users);
        cfg.memory_low_rate = get_num(c, "delta", cfg.memory_low_rate);
        cfg.memory_horizon = get_int(c, "horizon", cfg.memory_horizon);
        if (c.contains("p_values")) {
            if (!c["p_values"].is_array())
                throw std::invalid_argument("config: memory_sweep.p_values must be an array");
            for (const auto& v : c["p_values"]) cfg.memory_p_values.push_back(v.get<double>());
        }
    }
    if (root.contains("table")) {
        const auto& c = root["table"];
        reject_unknown_keys(
            c, {"count", "n_min", "n_max", "beta_min", "beta_max", "delta", "seed",
                "convergence_pct", "horizon_cap"},
            "table");
        cfg.table.count = get_int(c, "count", cfg.table.count);
        cfg.table.n_min = get_int(c, "n_min", cfg.table.n_min);
        cfg.table.n_max = get_int(c, "n_max", cfg.table.n_max);
        cfg.table.beta_min = get_num(c, "beta_min", cfg.table.beta_min);
        cfg.table.beta_max = get_num(c, "beta_max", cfg.table.beta_max);
        cfg.table.low_rate = get_num(c, "delta", cfg.table.low_rate);
        if (c.contains("seed")) cfg.table.seed = c["seed"].get<std::uint64_t>();
        cfg.table.convergence_pct = get_num(c, "convergence_pct", cfg.table.convergence_pct);
        cfg.table.horizon_cap = get_int(c, "horizon_cap", cfg.table.horizon_cap);
    }
    if (root.contains("trace")) {
        const auto& c = root["trace"];
        reject_unknown_keys(c, {"user", "start", "horizon"}, "trace");
        cfg.trace_user = get_int(c, "user", cfg.trace_user);
        cfg.trace_start = get_num(c, "start", cfg.trace_start);
        cfg.trace_horizon = get_int(c, "horizon", cfg.trace_horizon);
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

DownlinkSystem RunConfig::build_system() const {
    if (users.empty())
        throw std::invalid_argument("config: this experiment needs at least one user");
    std::vector<UserModel> models;
    models.reserve(users.size());
    for (const auto& u : users) models.push_back(u.build());
    return DownlinkSystem::validated(std::move(models), discount);
}

SystemState RunConfig::build_initial(const DownlinkSystem& sys) const {
    if (initial_beliefs.empty()) return sys.steady_initial();
    if (static_cast<int>(initial_beliefs.size()) != sys.size())
        throw std::invalid_argument("config: initial_beliefs length must match users");
    for (double b : initial_beliefs)
        if (!(b >= 0.0 && b <= 1.0))
            throw std::invalid_argument("config: initial beliefs must lie in [0,1]");
    return initial_beliefs;
}

}  // namespace memsched
