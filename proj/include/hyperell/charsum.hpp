#pragma once

// Brute-force multiple character sums S(beta; r), exact verification of the
// duality identities, and the exact mean of P(r) over the hyperelliptic
// ensemble together with its main-term predictor. All arithmetic exact.

#include <cstdint>
#include <string>
#include <vector>

#include "hyperell/combinat.hpp"
#include "hyperell/exact.hpp"
#include "hyperell/ffq.hpp"

namespace hyperell::charsum {

/// Exact value c * q^(-e/2) with e canonicalized to {0, 1}.
struct HalfPowerValue {
    exact::Rat c;
    int e = 0;
    int64_t q = 0;

    static HalfPowerValue make(exact::Rat base, int neg_half_exponent, int64_t q);
    double to_double() const;
    friend bool operator==(const HalfPowerValue& a, const HalfPowerValue& b) {
        if (a.c.is_zero() && b.c.is_zero()) return true;
        return a.q == b.q && a.e == b.e && a.c == b.c;
    }
    std::string to_string() const;
};

/// S(beta; r) = sum over monic B of degree beta and ordered tuples of
/// pairwise-distinct primes with deg P_j = r_j of (B / prod P_j).
/// Budgeted by q^beta * sum_j pi(r_j), the true symbol-evaluation count.
int64_t S_brute(int beta, const combinat::DegreeVector& r, const ffq::FieldOrder& f);

struct DualityReport {
    exact::BigInt lhs, rhs;
    bool ok = false;
    std::string detail;
};

/// sum r odd, beta <= sum r - 1:  S(beta) q^((sum r - 1)/2 - beta) = S(sum r - 1 - beta),
/// cleared of denominators in integers.
DualityReport duality_check_odd(int beta, const combinat::DegreeVector& r,
                                const ffq::FieldOrder& f);

/// sum r even:  S(sum r - 1) = -q^((sum r - 2)/2) * T(r) with T the number of
/// ordered distinct prime tuples.
DualityReport top_coeff_even(const combinat::DegreeVector& r, const ffq::FieldOrder& f);

/// sum r even, beta <= sum r - 2:
/// S(beta) q^(sum r / 2 - beta) = -S(sum r - 1 - beta) + (q-1) sum_{l <= sum r - 2 - beta} S(l).
DualityReport duality_check_even(int beta, const combinat::DegreeVector& r,
                                 const ffq::FieldOrder& f);

struct AvePResult {
    HalfPowerValue lhs;  // exhaustive ensemble mean of P(r)
    HalfPowerValue rhs;  // sigma/S expansion
    bool equal = false;
};

/// Exact identity: mean of P(r) over H(2g+1,q) against
/// (prod r_j / ((q-1) q^{2g})) q^{-sum r/2} sum_alpha sigma(r;alpha) S(2g+1-2alpha;r).
AvePResult avg_P_exact(const combinat::DegreeVector& r, const ffq::FieldOrder& f, int g);

enum class PredictedCase { generic, bounded, zero };

struct PredictedP {
    exact::Rat main;
    PredictedCase label = PredictedCase::zero;
};

/// Main-term predictor with the exceptional-hyperplane cases; requires
/// sum r < 4g(1 - delta).
PredictedP avg_P_predicted(const combinat::DegreeVector& r, int64_t q, int g,
                           double delta = 0.05);

/// S(beta; r) with large beta reduced through the duality identities to sums
/// of cheap low-degree S values; equals S_brute wherever both are in budget.
exact::BigInt S_eval(int beta, const combinat::DegreeVector& r, const ffq::FieldOrder& f,
                     double direct_cost_limit = 4e6, unsigned threads = 0);

/// <P(r)> through the sigma/S expansion with S_eval; the trend checks use
/// this where the direct ensemble sum is out of budget.
HalfPowerValue avg_P_via_sums(const combinat::DegreeVector& r, const ffq::FieldOrder& f, int g,
                              unsigned threads = 0);

/// Sum over ordered tuples of distinct primes of degrees r of prod_j (top/P_j).
/// Shared by S_brute (top = B) and the ensemble mean of P (top = h).
int64_t injective_symbol_sum(const ffq::Poly& top, const combinat::DegreeVector& r);

/// Number of ordered distinct prime tuples with the given degrees.
int64_t tuple_count(const combinat::DegreeVector& r, const ffq::FieldOrder& f);

}  // namespace hyperell::charsum
