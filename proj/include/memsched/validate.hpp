#pragma once

#include <string>
#include <vector>

namespace memsched {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // empty on pass; diagnostic on failure
};

// Deterministic invariant suite covering all library modules: belief
// dynamics, reward structure, subsidy value functions, index properties,
// policies and evaluators. Moderate problem sizes; a few seconds of runtime.
std::vector<CheckResult> run_validation_suite(int threads = 1);

}  // namespace memsched
