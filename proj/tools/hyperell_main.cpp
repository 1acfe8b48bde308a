// hyperell: exact hyperelliptic L-function statistics against the unitary
// symplectic kernel predictions. See the README for the subcommand reference.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <sstream>

#include "hyperell/cli.hpp"

namespace {

struct FlagSet {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> pairs;  // key, value
};

void add_common(CLI::App* sub, FlagSet& flags) {
    sub->add_option("--config", flags.config_path, "config file (key = value lines)");
    auto kv = [&flags](const std::string& key) {
        return [&flags, key](const std::string& v) { flags.pairs.emplace_back(key, v); };
    };
    sub->add_option_function<std::string>("--q", kv("q"), "field orders, comma separated");
    sub->add_option_function<std::string>("--g", kv("g"), "genus list, comma separated");
    sub->add_option_function<std::string>("--n", kv("n"), "n-level order");
    sub->add_option_function<std::string>("--tf", kv("tf"),
                                          "test functions, e.g. triangle:s=1.5 or a comma list");
    sub->add_option_function<std::string>("--mode", kv("mode"), "exhaustive or sampled");
    sub->add_option_function<std::string>("--samples", kv("samples"), "sampled-mode draw count");
    sub->add_option_function<std::string>("--rmt-samples", kv("rmt_samples"),
                                          "Monte-Carlo samples on the RMT side");
    sub->add_option_function<std::string>("--seed", kv("seed"), "master seed");
    sub->add_option_function<std::string>("--threads", kv("threads"),
                                          "worker threads (0 = available parallelism)");
    sub->add_option_function<std::string>("--x-max", kv("x_max"), "kernel truncation radius");
    sub->add_option_function<std::string>("--out", kv("out"), "CSV output path (atomic write)");
    sub->add_option_function<std::string>("--suite", kv("suite"),
                                          "verify suite name, 'all', or 'acceptance'");
    sub->add_option_function<std::string>("--poly", kv("poly"), "monic polynomial, e.g. x^3+2x+1");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperelliptic L-function statistics vs USp kernel predictions"};
    app.require_subcommand(1);
    FlagSet flags;
    for (const char* name :
         {"verify", "lpoly", "avg-nlevel", "gao", "rmt-kernel", "rmt-empirical", "scan-g",
          "scan-q"}) {
        add_common(app.add_subcommand(name), flags);
    }
    CLI11_PARSE(app, argc, argv);

    try {
        hyperell::cli::RunConfig cfg;
        if (!flags.config_path.empty()) {
            std::ifstream in(flags.config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config %s\n", flags.config_path.c_str());
                return 2;
            }
            std::ostringstream ss;
            ss << in.rdbuf();
            cfg = hyperell::cli::parse_config(ss.str());
        }
        for (const auto& [key, value] : flags.pairs)
            hyperell::cli::apply_key(cfg, key, value, "flag --" + key);
        cfg.subcommand = app.get_subcommands().at(0)->get_name();
        // scan-g is a sampled sweep unless the mode was given explicitly
        if (cfg.subcommand == "scan-g" &&
            std::none_of(flags.pairs.begin(), flags.pairs.end(),
                         [](const auto& p) { return p.first == "mode"; }))
            cfg.exhaustive = false;
        return hyperell::cli::run(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
