#include "memsched/run.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "memsched/csv.hpp"
#include "memsched/parallel.hpp"
#include "memsched/subsidy.hpp"
#include "memsched/validate.hpp"
#include "memsched/whittle.hpp"

namespace memsched {
namespace {

namespace fs = std::filesystem;

std::ofstream open_artifact(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);  // '\n' line ends on every platform
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cout << "writing " << path.string() << "\n";
    return out;
}

int run_index_curve(const RunConfig& cfg, const std::string& dir) {
    const UserModel user = cfg.users.at(static_cast<size_t>(cfg.curve_user)).build();
    auto out = open_artifact(dir, "index_curve.csv");
    CsvWriter w(out);
    w.cell("pi").cell("whittle_index");
    w.end_row();
    for (int i = 0; i < cfg.curve_points; ++i) {
        const double pi = static_cast<double>(i) / (cfg.curve_points - 1);
        w.cell(pi).cell(whittle_index(user.channel, user.reward, cfg.discount, pi));
        w.end_row();
    }
    return 0;
}

int run_threshold(const RunConfig& cfg, const std::string& dir) {
    const UserModel user = cfg.users.at(static_cast<size_t>(cfg.threshold_user)).build();
    const double lo = cfg.omega_min > 0.0 ? cfg.omega_min : user.channel.low_rate + 1e-3;
    const double hi = cfg.omega_max > 0.0 ? cfg.omega_max : 1.0 - 1e-3;
    if (!(lo < hi)) throw std::invalid_argument("threshold: omega_min must be below omega_max");
    auto out = open_artifact(dir, "threshold.csv");
    CsvWriter w(out);
    w.cell("omega").cell("kind").cell("threshold");
    w.end_row();
    std::vector<ThresholdClass> rows(static_cast<size_t>(cfg.omega_points));
    std::vector<double> omegas(static_cast<size_t>(cfg.omega_points));
    for (int i = 0; i < cfg.omega_points; ++i)
        omegas[static_cast<size_t>(i)] =
            cfg.omega_points == 1 ? lo : lo + (hi - lo) * i / (cfg.omega_points - 1);
    parallel_for(cfg.omega_points, cfg.table.threads, [&](int i) {
        const SubsidyProblem prob = SubsidyProblem::validated(
            user.channel, user.reward, cfg.discount, omegas[static_cast<size_t>(i)]);
        rows[static_cast<size_t>(i)] = classify_threshold(prob);
    });
    for (int i = 0; i < cfg.omega_points; ++i) {
        const auto& cls = rows[static_cast<size_t>(i)];
        const char* kind = cls.kind == ThresholdClass::Kind::always_active ? "always-active"
                           : cls.kind == ThresholdClass::Kind::always_idle ? "always-idle"
                                                                           : "interior";
        w.cell(omegas[static_cast<size_t>(i)]).cell(kind);
        if (cls.kind == ThresholdClass::Kind::interior)
            w.cell(cls.threshold);
        else
            w.cell("");
        w.end_row();
    }
    return 0;
}

int run_simulate(const RunConfig& cfg, const std::string& dir) {
    const DownlinkSystem sys = cfg.build_system();
    const SystemState init = cfg.build_initial(sys);
    auto out = open_artifact(dir, "simulate.csv");
    CsvWriter w(out);
    w.cell("policy").cell("mode").cell("horizon").cell("value").cell("std_error").cell("runs")
        .cell("seed");
    w.end_row();
    for (const auto& name : cfg.policies) {
        const PolicyKind kind = policy_from_name(name);
        if (cfg.eval.mode == EvalConfig::Mode::exact) {
            const double v = evaluate_exact(sys, kind, init, cfg.eval.horizon);
            w.cell(name).cell("exact").cell(cfg.eval.horizon).cell(v).cell(0.0).cell(1)
                .cell(cfg.eval.seed);
        } else {
            const MonteCarloEstimate mc = evaluate_monte_carlo(sys, kind, init, cfg.eval);
            w.cell(name).cell("monte-carlo").cell(cfg.eval.horizon).cell(mc.mean)
                .cell(mc.std_error).cell(cfg.eval.runs).cell(cfg.eval.seed);
        }
        w.end_row();
    }
    return 0;
}

int run_horizon_sweep(const RunConfig& cfg, const std::string& dir) {
    const DownlinkSystem sys = cfg.build_system();
    const SystemState init = cfg.build_initial(sys);
    const auto rows = horizon_sweep(sys, init, cfg.sweep_max_horizon);
    auto out = open_artifact(dir, "horizon_sweep.csv");
    CsvWriter w(out);
    w.cell("horizon").cell("v_opt").cell("v_index").cell("ratio");
    w.end_row();
    for (const auto& row : rows) {
        w.cell(row.horizon).cell(row.v_opt).cell(row.v_index)
            .cell(row.v_opt > 0.0 ? row.v_index / row.v_opt : 1.0);
        w.end_row();
    }
    return 0;
}

int run_memory_sweep(const RunConfig& cfg, const std::string& dir) {
    std::vector<double> ps = cfg.memory_p_values;
    if (ps.empty()) ps = {0.5, 0.6, 0.7, 0.8, 0.9};
    const auto rows = memory_sweep(cfg.memory_users, ps, cfg.memory_low_rate, cfg.discount,
                                   cfg.memory_horizon, cfg.table.threads);
    auto out = open_artifact(dir, "memory_sweep.csv");
    CsvWriter w(out);
    w.cell("p").cell("r").cell("v_opt").cell("v_index").cell("v_nofb");
    w.end_row();
    for (const auto& row : rows) {
        w.cell(row.stay_high).cell(1.0 - row.stay_high).cell(row.v_opt).cell(row.v_index)
            .cell(row.v_nofb);
        w.end_row();
    }
    return 0;
}

int run_table(const RunConfig& cfg, const std::string& dir) {
    const auto rows = random_instance_table(cfg.table);
    auto out = open_artifact(dir, "table.csv");
    CsvWriter w(out);
    w.cell("instance").cell("n").cell("beta").cell("horizon").cell("converged").cell("v_opt")
        .cell("v_index").cell("v_greedy").cell("v_nofb").cell("pct_gain").cell("seed");
    w.end_row();
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        w.cell(static_cast<int>(i)).cell(row.n_users).cell(row.discount).cell(row.horizon_used)
            .cell(row.converged).cell(row.v_opt).cell(row.v_index).cell(row.v_greedy)
            .cell(row.v_nofb);
        if (row.gain_pct)
            w.cell(*row.gain_pct);
        else
            w.cell("");
        w.cell(row.seed);
        w.end_row();
    }
    return 0;
}

int run_trace(const RunConfig& cfg, const std::string& dir) {
    const UserModel user = cfg.users.at(static_cast<size_t>(cfg.trace_user)).build();
    if (!(cfg.trace_start >= 0.0 && cfg.trace_start <= 1.0))
        throw std::invalid_argument("trace: start belief must lie in [0,1]");
    const auto rows =
        index_trace(user.channel, user.reward, cfg.discount, cfg.trace_start, cfg.trace_horizon);
    auto out = open_artifact(dir, "trace.csv");
    CsvWriter w(out);
    w.cell("t").cell("belief").cell("whittle_index");
    w.end_row();
    double x = cfg.trace_start;
    for (const auto& [t, wi] : rows) {
        w.cell(static_cast<long>(t)).cell(x).cell(wi);
        w.end_row();
        x = q_step(user.channel, x);
    }
    return 0;
}

int run_validate(const RunConfig& cfg, const std::string& dir, int threads) {
    (void)cfg;
    const auto results = run_validation_suite(threads);
    auto out = open_artifact(dir, "validate.csv");
    CsvWriter w(out);
    w.cell("check").cell("pass").cell("detail");
    w.end_row();
    bool all = true;
    const auto sanitize = [](std::string s) {
        for (char& c : s)
            if (c == ',' || c == '\n' || c == '\r') c = ';';
        return s;
    };
    for (const auto& r : results) {
        w.cell(sanitize(r.name)).cell(r.pass).cell(sanitize(r.detail));
        w.end_row();
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.pass) std::cout << " -- " << r.detail;
        std::cout << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "validation suite passed" : "validation suite FAILED") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int run_experiment(const RunConfig& config, const RunOptions& options) {
    RunConfig cfg = config;
    if (options.seed) {
        cfg.eval.seed = *options.seed;
        cfg.table.seed = *options.seed;
    }
    cfg.table.threads = options.threads;
    const std::string dir = options.out_dir.empty() ? cfg.output_path : options.out_dir;

    if (cfg.experiment == "index-curve") return run_index_curve(cfg, dir);
    if (cfg.experiment == "threshold") return run_threshold(cfg, dir);
    if (cfg.experiment == "simulate") return run_simulate(cfg, dir);
    if (cfg.experiment == "horizon-sweep") return run_horizon_sweep(cfg, dir);
    if (cfg.experiment == "memory-sweep") return run_memory_sweep(cfg, dir);
    if (cfg.experiment == "table") return run_table(cfg, dir);
    if (cfg.experiment == "trace") return run_trace(cfg, dir);
    if (cfg.experiment == "validate") return run_validate(cfg, dir, options.threads);
    throw std::invalid_argument("unknown experiment \"" + cfg.experiment + "\"");
}

}  // namespace memsched
