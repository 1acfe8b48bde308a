#include "hyperell/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "hyperell/ensemble.hpp"
#include "hyperell/gao.hpp"
#include "hyperell/lfun.hpp"
#include "hyperell/rmt.hpp"
#include "hyperell/util.hpp"
#include "hyperell/verify.hpp"

namespace hyperell::cli {

namespace {

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= v.size()) {
        size_t comma = v.find(',', start);
        if (comma == std::string::npos) comma = v.size();
        std::string item = v.substr(start, comma - start);
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        out.push_back(a == std::string::npos ? "" : item.substr(a, b - a + 1));
        start = comma + 1;
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

int64_t parse_int(const std::string& v, const std::string& where) {
    size_t used = 0;
    int64_t x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": expected an integer, got \"" + v + "\"");
    }
    if (used != v.size())
        throw std::invalid_argument(where + ": trailing characters in \"" + v + "\"");
    return x;
}

double parse_double(const std::string& v, const std::string& where) {
    size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": expected a number, got \"" + v + "\"");
    }
    if (used != v.size())
        throw std::invalid_argument(where + ": trailing characters in \"" + v + "\"");
    return x;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
    if (key == "q") {
        cfg.q_list.clear();
        for (const auto& item : split_list(value)) cfg.q_list.push_back(parse_int(item, where));
    } else if (key == "g") {
        cfg.g_list.clear();
        for (const auto& item : split_list(value))
            cfg.g_list.push_back(static_cast<int>(parse_int(item, where)));
    } else if (key == "n") {
        cfg.n = static_cast<int>(parse_int(value, where));
    } else if (key == "tf") {
        cfg.tf_specs = split_list(value);
    } else if (key == "mode") {
        if (value == "exhaustive")
            cfg.exhaustive = true;
        else if (value == "sampled")
            cfg.exhaustive = false;
        else
            throw std::invalid_argument(where + ": mode must be exhaustive or sampled");
    } else if (key == "samples") {
        cfg.samples = parse_int(value, where);
    } else if (key == "rmt_samples") {
        cfg.rmt_samples = parse_int(value, where);
    } else if (key == "seed") {
        cfg.seed = static_cast<uint64_t>(parse_int(value, where));
    } else if (key == "threads") {
        cfg.threads = static_cast<unsigned>(parse_int(value, where));
    } else if (key == "x_max") {
        cfg.x_max = parse_double(value, where);
    } else if (key == "out") {
        cfg.out_path = value;
    } else if (key == "suite") {
        cfg.suite = value;
    } else if (key == "poly") {
        cfg.poly_text = value;
    } else if (key == "budget") {
        set_budget_override(parse_int(value, where));
    } else {
        throw std::invalid_argument(where + ": unknown key \"" + key + "\"");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a != std::string::npos) {
            size_t b = line.find_last_not_of(" \t\r");
            std::string body = line.substr(a, b - a + 1);
            if (body.front() == '[') {
                if (body.back() != ']')
                    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                ", col " + std::to_string(a + body.size()) +
                                                ": unterminated section header");
                // section headers are allowed and carry no meaning
            } else {
                size_t eq = body.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                ", col " + std::to_string(a + 1) +
                                                ": expected key = value");
                auto trim = [](std::string s) {
                    size_t x = s.find_first_not_of(" \t");
                    if (x == std::string::npos) return std::string();
                    size_t y = s.find_last_not_of(" \t");
                    return s.substr(x, y - x + 1);
                };
                std::string key = trim(body.substr(0, eq));
                std::string value = trim(body.substr(eq + 1));
                if (key.empty())
                    throw std::invalid_argument("config line " + std::to_string(line_no) +
                                                ", col " + std::to_string(a + 1) + ": empty key");
                apply_key(cfg, key, value,
                          "config line " + std::to_string(line_no) + ", col " +
                              std::to_string(a + 1));
            }
        }
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.n < 1 || cfg.n > 8) throw std::invalid_argument("n must be in 1..8");
    for (int64_t q : cfg.q_list) ffq::FieldOrder f(q);  // throws on invalid q
    for (int g : cfg.g_list)
        if (g < 1 || g > 64) throw std::invalid_argument("g must be in 1..64");
    if (!cfg.exhaustive && cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (cfg.rmt_samples < 1) throw std::invalid_argument("rmt_samples must be >= 1");
    if (cfg.tf_specs.empty()) throw std::invalid_argument("at least one tf spec required");
    double total = 0;
    for (const auto& spec : cfg.tf_specs) {
        testfn::TestFn fn = testfn::TestFn::parse(spec);
        if (fn.support() >= 2.0)
            throw std::invalid_argument("test-function support must stay below 2: " + spec);
        total += fn.support();
    }
    int copies = cfg.n / std::max<int>(1, static_cast<int>(cfg.tf_specs.size()));
    if (static_cast<int>(cfg.tf_specs.size()) != cfg.n && cfg.tf_specs.size() != 1)
        throw std::invalid_argument("tf must list one spec or exactly n specs");
    if (cfg.tf_specs.size() == 1) total *= cfg.n;
    (void)copies;
    if (cfg.subcommand != "rmt-kernel" && cfg.subcommand != "rmt-empirical" && total >= 2.0)
        throw std::invalid_argument("sum of test-function supports must stay below 2");
}

const char* kCsvHeader = "suite,q,g,n,tf_spec,estimate,stderr,reference,abs_error,runtime_ms,seed";

std::string ExperimentRecord::to_row() const {
    std::string row = suite + "," + q + "," + g + "," + n + "," + tf_spec + "," +
                      fmt_double(estimate) + "," + fmt_double(stderr_est) + ",";
    if (has_reference) {
        row += fmt_double(reference);
        row += ",";
        row += fmt_double(std::abs(estimate - reference));
    } else {
        row += ",";
    }
    row += "," + std::to_string(runtime_ms) + "," + std::to_string(seed);
    return row;
}

void write_csv_atomic(const std::string& path, const std::vector<ExperimentRecord>& rows) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << kCsvHeader << "\n";
        for (const auto& r : rows) out << r.to_row() << "\n";
        out.flush();
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed: " + path);
}

namespace {

std::vector<testfn::TestFn> resolve_fns(const RunConfig& cfg) {
    std::vector<testfn::TestFn> fns;
    if (cfg.tf_specs.size() == 1) {
        testfn::TestFn fn = testfn::TestFn::parse(cfg.tf_specs[0]);
        for (int i = 0; i < cfg.n; ++i) fns.push_back(fn);
    } else {
        for (const auto& spec : cfg.tf_specs) fns.push_back(testfn::TestFn::parse(spec));
    }
    return fns;
}

std::string join_specs(const RunConfig& cfg) {
    std::string s;
    for (size_t i = 0; i < cfg.tf_specs.size(); ++i) {
        if (i) s += ";";
        s += cfg.tf_specs[i];
    }
    return s;
}

int64_t now_ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

void emit(const RunConfig& cfg, const std::vector<ExperimentRecord>& rows) {
    std::printf("%s\n", kCsvHeader);
    for (const auto& r : rows) std::printf("%s\n", r.to_row().c_str());
    if (!cfg.out_path.empty()) write_csv_atomic(cfg.out_path, rows);
}

int run_verify(const RunConfig& cfg) {
    verify::Options opt;
    opt.threads = cfg.threads;
    opt.seed = cfg.seed;
    std::vector<std::string> suites;
    if (cfg.suite == "all") {
        suites = verify::suite_names();
    } else {
        suites.push_back(cfg.suite);
    }
    bool all_pass = true;
    for (const auto& name : suites) {
        std::printf("suite %s\n", name.c_str());
        for (const auto& r : verify::run_suite(name, opt)) {
            std::printf("  %-4s %-64s %8.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                        r.seconds, r.detail.c_str());
            std::fflush(stdout);
            all_pass = all_pass && r.pass;
        }
    }
    return all_pass ? 0 : 5;
}

int run_lpoly(const RunConfig& cfg) {
    if (cfg.poly_text.empty()) throw std::invalid_argument("lpoly requires poly=<monic D>");
    ffq::FieldOrder f(cfg.q_list.at(0));
    ffq::MonicPoly d(ffq::parse_poly(f, cfg.poly_text));
    lfun::StarData sd = lfun::star_reduce(lfun::l_coeffs(d));
    std::string rec = lfun::star_record(sd);
    std::printf("%s\n", rec.c_str());
    if (!cfg.out_path.empty()) {
        std::string tmp = cfg.out_path + ".tmp";
        std::ofstream out(tmp, std::ios::trunc);
        out << rec << "\n";
        out.close();
        if (std::rename(tmp.c_str(), cfg.out_path.c_str()) != 0)
            throw std::runtime_error("rename failed");
    }
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    std::vector<ExperimentRecord> rows;
    auto fns = resolve_fns(cfg);
    const bool wants_ff = cfg.subcommand == "avg-nlevel" || cfg.subcommand == "scan-g" ||
                          cfg.subcommand == "scan-q";

    if (cfg.subcommand == "gao" || cfg.subcommand == "rmt-kernel") {
        auto t0 = std::chrono::steady_clock::now();
        ExperimentRecord r;
        r.suite = cfg.subcommand;
        r.n = std::to_string(cfg.n);
        r.tf_spec = join_specs(cfg);
        r.seed = cfg.seed;
        rmt::KernelSpec kspec;
        kspec.x_max = cfg.x_max;
        kspec.qmc_seed = cfg.seed;
        if (cfg.subcommand == "gao") {
            auto a = gao::A_value(gao::FnSet(fns));
            r.estimate = a.value;
            if (cfg.n <= 3) {
                auto k = rmt::kernel_integral(fns, cfg.n, kspec);
                r.has_reference = true;
                r.reference = k.value;
                r.stderr_est = k.stderr_est;
            }
        } else {
            auto k = rmt::kernel_integral(fns, cfg.n, kspec);
            r.estimate = k.value;
            r.stderr_est = k.stderr_est;
            if (cfg.n <= 8) {
                r.has_reference = true;
                r.reference = gao::A_value(gao::FnSet(fns)).value;
            }
        }
        r.runtime_ms = now_ms_since(t0);
        rows.push_back(r);
        emit(cfg, rows);
        return 0;
    }

    if (cfg.subcommand == "rmt-empirical") {
        for (int g : cfg.g_list) {
            auto t0 = std::chrono::steady_clock::now();
            auto res = rmt::nlevel_rmt_empirical(fns, g, cfg.rmt_samples, cfg.seed, cfg.n,
                                                 cfg.threads);
            ExperimentRecord r;
            r.suite = cfg.subcommand;
            r.g = std::to_string(g);
            r.n = std::to_string(cfg.n);
            r.tf_spec = join_specs(cfg);
            r.seed = cfg.seed;
            r.estimate = res.mean;
            r.stderr_est = res.stderr_est;
            if (cfg.n <= 3) {
                rmt::KernelSpec kspec;
                kspec.x_max = cfg.x_max;
                kspec.qmc_seed = cfg.seed;
                r.has_reference = true;
                r.reference = rmt::kernel_integral(fns, cfg.n, kspec).value;
            }
            r.runtime_ms = now_ms_since(t0);
            rows.push_back(r);
        }
        emit(cfg, rows);
        return 0;
    }

    if (wants_ff) {
        // scan-q compares against one RMT empirical mean per g
        std::map<int, double> usp_mean;
        double aval = 0;
        bool have_a = false;
        if (cfg.subcommand == "scan-q") {
            for (int g : cfg.g_list)
                usp_mean[g] =
                    rmt::nlevel_rmt_empirical(fns, g, cfg.rmt_samples, cfg.seed, cfg.n, cfg.threads)
                        .mean;
        } else {
            aval = gao::A_value(gao::FnSet(fns)).value;
            have_a = true;
        }
        for (int64_t q : cfg.q_list) {
            ffq::FieldOrder f(q);
            for (int g : cfg.g_list) {
                auto t0 = std::chrono::steady_clock::now();
                ensemble::EnsembleSpec spec =
                    cfg.exhaustive ? ensemble::EnsembleSpec::exhaust(f, g)
                                   : ensemble::EnsembleSpec::sampled(f, g, cfg.samples, cfg.seed);
                auto res = ensemble::avg_nlevel(spec, fns, cfg.n, cfg.threads);
                ExperimentRecord r;
                r.suite = cfg.subcommand;
                r.q = std::to_string(q);
                r.g = std::to_string(g);
                r.n = std::to_string(cfg.n);
                r.tf_spec = join_specs(cfg);
                r.seed = cfg.exhaustive ? 0 : cfg.seed;
                r.estimate = res.mean;
                r.stderr_est = res.stderr_est;
                r.has_reference = true;
                r.reference = cfg.subcommand == "scan-q" ? usp_mean[g] : (have_a ? aval : 0.0);
                r.runtime_ms = now_ms_since(t0);
                rows.push_back(r);
            }
        }
        emit(cfg, rows);
        return 0;
    }
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        validate(cfg);
        if (cfg.subcommand == "verify") return run_verify(cfg);
        if (cfg.subcommand == "lpoly") return run_lpoly(cfg);
        return run_sweep(cfg);
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget exceeded: %s\n", e.what());
        return 3;
    } catch (const AccuracyError& e) {
        std::fprintf(stderr, "accuracy not met: %s\n", e.what());
        return 4;
    } catch (const IdentityError& e) {
        std::fprintf(stderr, "identity failure: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace hyperell::cli
