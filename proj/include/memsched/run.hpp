#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "memsched/config.hpp"

namespace memsched {

struct RunOptions {
    std::string out_dir;  // empty -> config output_path
    int threads = 1;
    std::optional<std::uint64_t> seed;  // overrides config seeds
};

// Executes the configured experiment, writes its CSV artifact(s) under the
// output directory and a short summary to stdout. Returns the process exit
// status: 0 on success, 1 on invariant/validation failure.
int run_experiment(const RunConfig& config, const RunOptions& options);

}  // namespace memsched
