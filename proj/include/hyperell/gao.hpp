#pragma once

// The combinatorial predictions: the half-space mean D(u_1..u_m), the pairing
// expansion B(u_1..u_m), and the full n-level density expression
// A(f_1,...,f_n) built from partitions, subset chains, pairings and clipped
// region integrals.

#include <vector>

#include "hyperell/testfn.hpp"

namespace hyperell::gao {

/// Ordered test functions with the support constraint sum s_k < 2.
struct FnSet {
    std::vector<testfn::TestFn> fns;
    explicit FnSet(std::vector<testfn::TestFn> f);
    int size() const { return static_cast<int>(fns.size()); }
};

/// D(u_1..u_m) = -2^(m-1) sum_{I subset [m]} (-1)^|I| region_integral(I, u-hats).
testfn::QuadResult D_value(const FnSet& us);

/// B(u_1..u_m): perfect-pairing expansion with D on the complements.
testfn::QuadResult B_value(const FnSet& us);

/// The full n-level density expression A(f_1,...,f_n); n <= 8.
testfn::QuadResult A_value(const FnSet& fs);

/// Algebraic reduction of A at n = 1: fhat(0) - f(0)/2 + integral_1^inf fhat.
/// Kept as an independent regression for the partition/subset bookkeeping.
double a1_closed_form(const testfn::TestFn& fn);

}  // namespace hyperell::gao
