#pragma once

// Experiment runner: config-driven sweeps over (q, g, n, test functions),
// deterministic CSV emission, and the verify harness.

#include <cstdint>
#include <string>
#include <vector>

namespace hyperell::cli {

struct RunConfig {
    std::string subcommand;
    std::vector<int64_t> q_list{3};
    std::vector<int> g_list{1};
    int n = 1;
    std::vector<std::string> tf_specs{"triangle:s=1.0"};
    bool exhaustive = true;
    int64_t samples = 10000;       // sampled-mode draws
    int64_t rmt_samples = 100000;  // Monte-Carlo samples on the RMT side
    uint64_t seed = 1;
    unsigned threads = 0;              // 0 = available parallelism
    double x_max = 60.0;
    std::string out_path;              // empty: stdout only
    std::string suite = "all";         // verify
    std::string poly_text;             // lpoly
};

/// Parses the `key = value` config grammar ('#' comments, [section] headers,
/// comma-separated lists). Unknown keys and malformed values are fatal with
/// line/column positions. The defaults above apply to missing keys.
RunConfig parse_config(const std::string& text);

/// Applies a single key=value pair (shared by the config parser and flags).
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where);

/// Validates the assembled config against the module preconditions.
void validate(const RunConfig& cfg);

/// One CSV row; reference empty when no prediction is defined.
struct ExperimentRecord {
    std::string suite;
    std::string q, g, n, tf_spec;
    double estimate = 0.0;
    double stderr_est = 0.0;
    bool has_reference = false;
    double reference = 0.0;
    int64_t runtime_ms = 0;
    uint64_t seed = 0;
    std::string to_row() const;
};

extern const char* kCsvHeader;

/// Atomic write (temp file + rename); never leaves a partial file behind.
void write_csv_atomic(const std::string& path, const std::vector<ExperimentRecord>& rows);

/// Executes the configured subcommand. Exit codes: 0 success, 2 usage/parse,
/// 3 budget exceeded, 4 accuracy not met, 5 identity failure.
int run(const RunConfig& cfg);

}  // namespace hyperell::cli
