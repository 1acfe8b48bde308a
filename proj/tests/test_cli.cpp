#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hyperell/cli.hpp"

using namespace hyperell::cli;

namespace {

std::string strip_runtime(const std::string& csv) {
    // drop the runtime_ms column (second to last)
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        size_t last = line.rfind(',');
        if (last == std::string::npos) {
            out += line + "\n";
            continue;
        }
        size_t second = line.rfind(',', last - 1);
        out += line.substr(0, second) + line.substr(last) + "\n";
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config grammar") {
    RunConfig cfg = parse_config("q = 3,5\ng = 1,2\ntf = triangle:s=1.0\n");
    CHECK(cfg.q_list == std::vector<int64_t>{3, 5});
    CHECK(cfg.g_list == std::vector<int>{1, 2});
    CHECK(cfg.tf_specs == std::vector<std::string>{"triangle:s=1.0"});

    // comments, sections and blank lines
    RunConfig cfg2 = parse_config("# header\n[run]\n  n = 2  # trailing\n\nseed = 42\n");
    CHECK(cfg2.n == 2);
    CHECK(cfg2.seed == 42);

    // empty file: all defaults
    RunConfig cfg3 = parse_config("");
    CHECK(cfg3.q_list == std::vector<int64_t>{3});
    CHECK(cfg3.n == 1);

    // unknown keys fatal with position
    try {
        parse_config("q = 3\nbogus = 1\n");
        FAIL("expected throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("q 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("[open\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("g = one\n"), std::invalid_argument);
}

TEST_CASE("validation rejects out-of-range supports") {
    RunConfig cfg = parse_config("tf = triangle:s=2.5\n");
    cfg.subcommand = "avg-nlevel";
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    RunConfig cfg2 = parse_config("tf = triangle:s=1.2,triangle:s=0.9\nn = 2\n");
    cfg2.subcommand = "avg-nlevel";
    CHECK_THROWS_AS(validate(cfg2), std::invalid_argument);

    RunConfig ok = parse_config("tf = triangle:s=1.2,triangle:s=0.7\nn = 2\n");
    ok.subcommand = "avg-nlevel";
    CHECK_NOTHROW(validate(ok));

    RunConfig bad_n = parse_config("n = 9\n");
    bad_n.subcommand = "gao";
    CHECK_THROWS_AS(validate(bad_n), std::invalid_argument);

    RunConfig bad_q = parse_config("q = 9\n");
    bad_q.subcommand = "avg-nlevel";
    CHECK_THROWS_AS(validate(bad_q), std::invalid_argument);
}

TEST_CASE("csv rows and the empty reference marker") {
    ExperimentRecord r;
    r.suite = "gao";
    r.n = "1";
    r.tf_spec = "triangle:s=1.5";
    r.estimate = 1.0 / 3.0;
    r.seed = 7;
    CHECK(r.to_row() == "gao,,,1,triangle:s=1.5,0.33333333333333331,0,,,0,7");
    r.has_reference = true;
    r.reference = 0.25;
    CHECK(r.to_row().find(",0.25,0.083333333333333315,") != std::string::npos);
}

TEST_CASE("determinism: identical config and seed give identical csv") {
    RunConfig cfg = parse_config(
        "q = 3\ng = 2\nn = 1\ntf = triangle:s=1.0\nmode = sampled\nsamples = 200\nseed = 9\n");
    cfg.subcommand = "avg-nlevel";
    cfg.out_path = "/tmp/hyperell_det_a.csv";
    REQUIRE(run(cfg) == 0);
    cfg.out_path = "/tmp/hyperell_det_b.csv";
    REQUIRE(run(cfg) == 0);
    std::string a = slurp("/tmp/hyperell_det_a.csv");
    std::string b = slurp("/tmp/hyperell_det_b.csv");
    CHECK(strip_runtime(a) == strip_runtime(b));
    CHECK(a.find("avg-nlevel,3,2,1,") != std::string::npos);
    std::remove("/tmp/hyperell_det_a.csv");
    std::remove("/tmp/hyperell_det_b.csv");
}

TEST_CASE("atomic csv write leaves no partial file on failure") {
    std::vector<ExperimentRecord> rows(1);
    CHECK_THROWS(write_csv_atomic("/nonexistent_dir_hyperell/x.csv", rows));
    // and the temp of a successful write is cleaned up
    REQUIRE_NOTHROW(write_csv_atomic("/tmp/hyperell_atomic.csv", rows));
    std::ifstream tmp("/tmp/hyperell_atomic.csv.tmp");
    CHECK_FALSE(tmp.good());
    std::remove("/tmp/hyperell_atomic.csv");
}

TEST_CASE("budget key accepted") {
    CHECK_NOTHROW(parse_config("budget = 2000000000\n"));
}

TEST_CASE("exit codes") {
    // budget exceeded -> 3
    RunConfig big = parse_config("q = 7\ng = 12\ntf = triangle:s=0.4\n");
    big.subcommand = "avg-nlevel";
    CHECK(run(big) == 3);
    // usage error -> 2
    RunConfig bad;
    bad.subcommand = "lpoly";
    bad.poly_text = "";
    CHECK(run(bad) == 2);
    // malformed polynomial -> 2
    RunConfig badpoly;
    badpoly.subcommand = "lpoly";
    badpoly.poly_text = "x^^3";
    CHECK(run(badpoly) == 2);
}
