#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hyperell {

/// Thrown when an operation would exceed the elementary-operation budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a numerical routine cannot reach its accuracy target.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an exact identity that must hold fails (implementation bug
/// or invalid input slipped past a precondition).
struct IdentityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline int64_t& budget_override() {
    static int64_t v = 0;  // 0 = unset
    return v;
}
}  // namespace detail

/// Config-level budget override; the HYPERELL_BUDGET env var still wins.
inline void set_budget_override(int64_t v) { detail::budget_override() = v; }

/// Global elementary-operation budget. Precedence: HYPERELL_BUDGET env var,
/// then the config override, then 1e9.
inline int64_t op_budget() {
    static const int64_t env = [] {
        if (const char* e = std::getenv("HYPERELL_BUDGET")) {
            double d = std::strtod(e, nullptr);
            if (d > 0) return static_cast<int64_t>(d);
        }
        return static_cast<int64_t>(0);
    }();
    if (env > 0) return env;
    if (detail::budget_override() > 0) return detail::budget_override();
    return 1000000000;  // 1e9 elementary evaluations
}

inline void check_budget(double cost, const std::string& what) {
    if (cost > static_cast<double>(op_budget()))
        throw BudgetError(what + ": estimated cost " + std::to_string(cost) +
                          " exceeds budget " + std::to_string(op_budget()));
}

// 64-bit avalanche mix (splitmix64 finalizer). Per-draw seeds are
// mix64(master_seed ^ (index * 0x9E3779B97F4A7C15)); the exact constants are
// part of the reproducibility contract and documented in the README.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    return mix64(master ^ (index * 0x9E3779B97F4A7C15ULL));
}

/// Deterministic splitmix64 stream; the only RNG used anywhere.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

    /// Uniform residue in [0, m). Modulo bias is < m / 2^64, irrelevant here.
    int64_t next_mod(int64_t m) { return static_cast<int64_t>(next() % static_cast<uint64_t>(m)); }

    /// Standard normal via Box-Muller.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double(), u2 = next_double();
        while (u1 <= 0) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        have_spare_ = true;
        spare_ = r * std::sin(6.283185307179586476925286766559 * u2);
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Compensated (Kahan) accumulator, used for every ensemble reduction.
struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline unsigned default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? n : 1;
}

// Runs f(chunk_index, begin, end) over [0,n) split into fixed-size chunks.
// Partials are returned in chunk order regardless of execution order, so the
// caller's sequential combine is deterministic.
template <class Partial, class ChunkFn>
std::vector<Partial> run_chunks(int64_t n, int64_t chunk_size, unsigned threads, ChunkFn f) {
    if (chunk_size <= 0) chunk_size = 1;
    int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<Partial> out(static_cast<size_t>(n_chunks));
    if (n_chunks == 0) return out;
    if (threads == 0) threads = default_threads();
    unsigned use = static_cast<unsigned>(std::min<int64_t>(threads, n_chunks));
    if (use <= 1) {
        for (int64_t c = 0; c < n_chunks; ++c)
            out[static_cast<size_t>(c)] = f(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
        return out;
    }
    std::atomic<int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(use);
    for (unsigned t = 0; t < use; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                int64_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                out[static_cast<size_t>(c)] = f(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace hyperell
