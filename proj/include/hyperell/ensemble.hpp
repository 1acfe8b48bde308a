#pragma once

// The probability space H(2g+1, q) of squarefree monic polynomials of degree
// 2g+1: exhaustive enumeration and seeded sampling, the averaging operator,
// the character-average identity, exact linear statistics and n-level
// densities in direct and sieved form.

#include <cstdint>
#include <functional>
#include <vector>

#include "hyperell/exact.hpp"
#include "hyperell/ffq.hpp"
#include "hyperell/lfun.hpp"
#include "hyperell/testfn.hpp"

namespace hyperell::ensemble {

struct EnsembleSpec {
    ffq::FieldOrder field;
    int g = 1;
    bool exhaustive = true;
    int64_t n_samples = 0;       // sampled mode
    uint64_t master_seed = 0;    // sampled mode

    static EnsembleSpec exhaust(ffq::FieldOrder f, int g);
    static EnsembleSpec sampled(ffq::FieldOrder f, int g, int64_t n, uint64_t seed);
};

struct AvgResult {
    double mean = 0.0;
    double stderr_est = 0.0;  // 0 in exhaustive mode
    int64_t count = 0;
};

/// #H(2g+1, q) = (q-1) q^(2g).
int64_t ensemble_count(const ffq::FieldOrder& f, int g);

/// Visits every member once (exhaustive, lexicographic) or yields the seeded
/// rejection-sampled draws. Deterministic for a fixed spec.
void for_each_h(const EnsembleSpec& spec, const std::function<void(const ffq::MonicPoly&)>& fn);

/// One reproducible draw: the sample with the given index under master_seed.
ffq::MonicPoly sample_h(const ffq::FieldOrder& f, int g, uint64_t master_seed, uint64_t index);

/// Exhaustive-mode mean of chi_h(f), computed both directly and through the
/// squarefree-sieve expansion; the two must agree exactly.
exact::Rat avg_char(const ffq::Poly& f, const EnsembleSpec& spec);

/// sum_{1<=|j|<=g} ftilde(theta_j) from exact scaled traces; exact identity
/// given exact c_r (the trivial-zero count is subtracted, zero here).
double linear_stat(const lfun::ScaledTraces& st, const testfn::TestFn& tf, int g);

/// tr Theta^r values from an explicit list of eigenphases.
std::vector<double> tau_from_phases(const std::vector<double>& phases, int r_max);

/// Direct n-level sum over index tuples with pairwise-distinct |j|.
double nlevel_direct(const std::vector<double>& phases, const std::vector<testfn::TestFn>& fns,
                     int g, int n);

/// Sieved n-level density via the set-partition expansion; block transforms
/// are the exact discrete convolutions on the frequency grid r/(2g), so this
/// agrees with nlevel_direct to rounding.
double nlevel_sieved_tau(const std::vector<double>& tau, const std::vector<testfn::TestFn>& fns,
                         int g, int n);
double nlevel_sieved(const lfun::ScaledTraces& st, const std::vector<testfn::TestFn>& fns, int g,
                     int n);
double nlevel_sieved_phases(const std::vector<double>& phases,
                            const std::vector<testfn::TestFn>& fns, int g, int n);

/// Ensemble mean of the sieved n-level density; deterministic chunked
/// reduction, Kahan-compensated.
AvgResult avg_nlevel(const EnsembleSpec& spec, const std::vector<testfn::TestFn>& fns, int n,
                     unsigned threads = 0);

/// Primes-only weighted character sum (prime powers excluded).
double diag_T(const ffq::MonicPoly& h, const testfn::TestFn& tf, int g);

/// Prime-power remainder: linear_stat = fhat(0) - diag_T - this, exactly.
double prime_power_remainder(const ffq::MonicPoly& h, const testfn::TestFn& tf, int g);

}  // namespace hyperell::ensemble
