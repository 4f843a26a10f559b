// validate.hpp — built-in acceptance suite behind the CLI validate mode.
// Each check pins its expected values and tolerances; results carry a
// human-readable diagnosis either way.

#pragma once

#include <string>
#include <vector>

namespace lambdacav {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

std::vector<CheckResult> run_acceptance_suite(int threads = 0);

} // namespace lambdacav
