#pragma once

// Verification suites: one suite per module mirroring its invariant list,
// plus the acceptance suite that drives every pinned criterion end to end.

#include <string>
#include <vector>

namespace hyperell::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    unsigned threads = 0;
    uint64_t seed = 20240817;  // master seed for the sampled acceptance runs
};

std::vector<std::string> suite_names();  // module suites, excluding "acceptance"

/// Runs one module suite ("ffq", "lfun", ...) or "acceptance".
std::vector<CheckResult> run_suite(const std::string& name, const Options& opt = {});

/// The thirteen acceptance criteria, in order.
std::vector<CheckResult> run_acceptance(const Options& opt = {});

}  // namespace hyperell::verify
