// Acceptance suite: runs every pinned criterion and prints one line each.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "hyperell/verify.hpp"

int main(int argc, char** argv) {
    hyperell::verify::Options opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strncmp(argv[i], "--threads=", 10) == 0)
            opt.threads = static_cast<unsigned>(std::atoi(argv[i] + 10));
    }
    bool all_pass = true;
    for (const auto& r : hyperell::verify::run_acceptance(opt)) {
        std::printf("%s %s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL CRITERIA PASS" : "ACCEPTANCE: FAILURES");
    return all_pass ? 0 : 1;
}
