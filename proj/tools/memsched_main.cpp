// memsched: opportunistic downlink scheduling over two-state Markov channels
// with belief-based estimation-aware rewards. Computes subsidy thresholds and
// Whittle indices in closed form, evaluates scheduling policies exactly or by
// Monte Carlo, and emits CSV artifacts for plotting.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "memsched/run.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int threads = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path, "JSON run config (see README for the schema)");
    cmd->add_option("--out", args->out_dir, "output directory for CSV artifacts");
    cmd->add_option("--threads", args->threads, "worker threads; results are identical for any count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args->seed, "master seed override")->each([args](const std::string&) {
        args->seed_set = true;
    });
}

memsched::RunConfig base_config(const CommonArgs& args, const std::string& experiment) {
    memsched::RunConfig cfg;
    if (!args.config_path.empty()) cfg = memsched::RunConfig::from_file(args.config_path);
    cfg.experiment = experiment;
    return cfg;
}

int dispatch(const memsched::RunConfig& cfg, const CommonArgs& args) {
    memsched::RunOptions opt;
    opt.out_dir = args.out_dir;
    opt.threads = args.threads;
    if (args.seed_set) opt.seed = args.seed;
    return memsched::run_experiment(cfg, opt);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memory-aware opportunistic downlink scheduling simulator"};
    app.require_subcommand(1);

    struct SingleUserFlags {
        double p = 0.8, r = 0.2, delta = 0.2, beta = 0.9;
        bool any = false;
    };
    auto add_user_flags = [](CLI::App* cmd, SingleUserFlags* f) {
        cmd->add_option("--p", f->p, "stay-high probability P(h|h)")->each([f](const std::string&) {
            f->any = true;
        });
        cmd->add_option("--r", f->r, "low-to-high probability P(h|l)")->each([f](const std::string&) {
            f->any = true;
        });
        cmd->add_option("--delta", f->delta, "low-state rate")->each([f](const std::string&) {
            f->any = true;
        });
        cmd->add_option("--beta", f->beta, "discount factor")->each([f](const std::string&) {
            f->any = true;
        });
    };
    auto apply_user_flags = [](memsched::RunConfig& cfg, const SingleUserFlags& f) {
        if (cfg.users.empty() || f.any) {
            memsched::UserSpec spec;
            spec.stay_high = f.p;
            spec.low_to_high = f.r;
            spec.low_rate = f.delta;
            if (cfg.users.empty())
                cfg.users.push_back(spec);
            else
                cfg.users[0] = spec;
            cfg.discount = f.beta;
        }
    };

    CommonArgs index_args, thr_args, sim_args, hs_args, ms_args, tab_args, tr_args, val_args;
    SingleUserFlags index_flags, thr_flags, tr_flags;

    auto* index_cmd = app.add_subcommand("index", "dump the closed-form index curve as CSV");
    add_common(index_cmd, &index_args);
    add_user_flags(index_cmd, &index_flags);
    int curve_points = 0;
    index_cmd->add_option("--points", curve_points, "curve resolution (default 1001)");

    auto* thr_cmd = app.add_subcommand("threshold", "subsidy-threshold curve via the value-iteration oracle");
    add_common(thr_cmd, &thr_args);
    add_user_flags(thr_cmd, &thr_flags);

    auto* sim_cmd = app.add_subcommand("simulate", "evaluate configured policies on one system");
    add_common(sim_cmd, &sim_args);

    auto* hs_cmd = app.add_subcommand("sweep-horizon", "optimal vs index policy for growing horizons");
    add_common(hs_cmd, &hs_args);

    auto* ms_cmd = app.add_subcommand("sweep-memory", "identical-user sweep over channel memory");
    add_common(ms_cmd, &ms_args);

    auto* tab_cmd = app.add_subcommand("table", "random-instance %gain table");
    add_common(tab_cmd, &tab_args);
    int tab_count = 0;
    tab_cmd->add_option("--count", tab_count, "number of random instances");

    auto* tr_cmd = app.add_subcommand("trace", "index evolution along the idle belief drift");
    add_common(tr_cmd, &tr_args);
    add_user_flags(tr_cmd, &tr_flags);
    double trace_start = -1.0;
    tr_cmd->add_option("--pi0", trace_start, "starting belief (default 0.3)");
    int trace_horizon = 0;
    tr_cmd->add_option("--horizon", trace_horizon, "trace length (default 20)");

    auto* val_cmd = app.add_subcommand("validate", "run the full invariant suite");
    add_common(val_cmd, &val_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (index_cmd->parsed()) {
            auto cfg = base_config(index_args, "index-curve");
            apply_user_flags(cfg, index_flags);
            if (curve_points > 0) cfg.curve_points = curve_points;
            return dispatch(cfg, index_args);
        }
        if (thr_cmd->parsed()) {
            auto cfg = base_config(thr_args, "threshold");
            apply_user_flags(cfg, thr_flags);
            return dispatch(cfg, thr_args);
        }
        if (sim_cmd->parsed()) return dispatch(base_config(sim_args, "simulate"), sim_args);
        if (hs_cmd->parsed()) return dispatch(base_config(hs_args, "horizon-sweep"), hs_args);
        if (ms_cmd->parsed()) return dispatch(base_config(ms_args, "memory-sweep"), ms_args);
        if (tab_cmd->parsed()) {
            auto cfg = base_config(tab_args, "table");
            if (tab_count > 0) cfg.table.count = tab_count;
            return dispatch(cfg, tab_args);
        }
        if (tr_cmd->parsed()) {
            auto cfg = base_config(tr_args, "trace");
            apply_user_flags(cfg, tr_flags);
            if (trace_start >= 0.0) cfg.trace_start = trace_start;
            if (trace_horizon > 0) cfg.trace_horizon = trace_horizon;
            return dispatch(cfg, tr_args);
        }
        if (val_cmd->parsed()) return dispatch(base_config(val_args, "validate"), val_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
