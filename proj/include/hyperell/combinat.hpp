#pragma once

// Set-partition lattice with its Mobius function, perfect pairings, and the
// exact quantities sigma(r;alpha), phi_delta(r), Phi_beta(r). Everything is
// exact; floats never enter this module.

#include <cstdint>
#include <vector>

#include "hyperell/exact.hpp"

namespace hyperell::combinat {

/// Set partition of {0..n-1} in canonical restricted-growth form.
struct SetPartition {
    std::vector<int> rgs;  // rgs[i] = block label of element i, first occurrences increasing
    int n() const { return static_cast<int>(rgs.size()); }
    int num_blocks() const;
    std::vector<std::vector<int>> blocks() const;
};

/// All partitions of {0..n-1}; Bell(n) entries; 1 <= n <= 12.
std::vector<SetPartition> partitions(int n);

/// true iff f refines g (every block of g is a union of blocks of f).
bool refines(const SetPartition& f, const SetPartition& g);

/// mu(0-hat, f) = prod_l (-1)^(|F_l|-1) (|F_l|-1)!.
int64_t partition_mobius(const SetPartition& f);

/// All perfect matchings of the given elements; (|S|-1)!! of them when |S| is
/// even, none when odd, and the single empty matching when |S| = 0.
std::vector<std::vector<std::pair<int, int>>> pairings(const std::vector<int>& s);

using DegreeVector = std::vector<int>;  // entries positive

/// Coefficient of X^alpha in (1 - qX) / prod_j (1 - X^(r_j)); equals the sum
/// of mu(A) over monic A of degree alpha coprime to fixed distinct primes of
/// degrees r.
exact::BigInt sigma_sum(const DegreeVector& r, int alpha, int64_t q);

/// phi_delta(r) = sum over subsets I with sigma(I) <= delta of (-1)^|I| q^(-sigma(I)).
exact::Rat phi_delta(const DegreeVector& r, int delta, int64_t q);

/// Phi_beta(r) = -q^L phi_L + (q-1) sum_{l<L} q^l phi_l with 2L = sum r - 1 - beta.
/// Requires beta odd, sum r even, beta <= sum r - 2.
exact::Rat phi_cap(const DegreeVector& r, int beta, int64_t q);

/// The subset-sum form -sum_{sigma(I) <= L} (-1)^|I| that phi_cap must equal.
exact::Rat phi_cap_subset_form(const DegreeVector& r, int beta, int64_t q);

int sigma_of(const DegreeVector& r);  // sum of entries

}  // namespace hyperell::combinat
