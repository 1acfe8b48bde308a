#include "hyperell/combinat.hpp"

#include <algorithm>
#include <stdexcept>

namespace hyperell::combinat {

using exact::BigInt;
using exact::Rat;

int SetPartition::num_blocks() const {
    int m = -1;
    for (int v : rgs) m = std::max(m, v);
    return m + 1;
}

std::vector<std::vector<int>> SetPartition::blocks() const {
    std::vector<std::vector<int>> b(static_cast<size_t>(num_blocks()));
    for (int i = 0; i < n(); ++i) b[static_cast<size_t>(rgs[static_cast<size_t>(i)])].push_back(i);
    return b;
}

std::vector<SetPartition> partitions(int n) {
    if (n < 1 || n > 12) throw std::invalid_argument("partitions: need 1 <= n <= 12");
    std::vector<SetPartition> out;
    std::vector<int> rgs(static_cast<size_t>(n), 0);
    // iterate restricted growth strings
    for (;;) {
        out.push_back(SetPartition{rgs});
        int i = n - 1;
        while (i > 0) {
            int maxv = 0;
            for (int j = 0; j < i; ++j) maxv = std::max(maxv, rgs[static_cast<size_t>(j)]);
            if (rgs[static_cast<size_t>(i)] < maxv + 1) break;
            --i;
        }
        if (i == 0) break;
        ++rgs[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) rgs[static_cast<size_t>(j)] = 0;
    }
    return out;
}

bool refines(const SetPartition& f, const SetPartition& g) {
    if (f.n() != g.n()) throw std::invalid_argument("refines: size mismatch");
    // every f-block must lie inside a single g-block
    std::vector<int> image(static_cast<size_t>(f.num_blocks()), -1);
    for (int i = 0; i < f.n(); ++i) {
        int fb = f.rgs[static_cast<size_t>(i)], gb = g.rgs[static_cast<size_t>(i)];
        if (image[static_cast<size_t>(fb)] == -1)
            image[static_cast<size_t>(fb)] = gb;
        else if (image[static_cast<size_t>(fb)] != gb)
            return false;
    }
    return true;
}

int64_t partition_mobius(const SetPartition& f) {
    int64_t m = 1;
    for (const auto& block : f.blocks()) {
        int64_t fact = 1;
        for (size_t k = 2; k < block.size(); ++k) fact *= static_cast<int64_t>(k);
        m *= (block.size() % 2 == 0 ? -1 : 1) * fact;
    }
    return m;
}

std::vector<std::vector<std::pair<int, int>>> pairings(const std::vector<int>& s) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (s.size() % 2 != 0) return out;
    if (s.empty()) {
        out.emplace_back();
        return out;
    }
    std::vector<int> rest(s.begin() + 1, s.end());
    for (size_t i = 0; i < rest.size(); ++i) {
        std::vector<int> sub;
        for (size_t j = 0; j < rest.size(); ++j)
            if (j != i) sub.push_back(rest[j]);
        for (auto& tail : pairings(sub)) {
            tail.insert(tail.begin(), {s[0], rest[i]});
            out.push_back(std::move(tail));
        }
    }
    return out;
}

int sigma_of(const DegreeVector& r) {
    int s = 0;
    for (int v : r) s += v;
    return s;
}

BigInt sigma_sum(const DegreeVector& r, int alpha, int64_t q) {
    if (alpha < 0) throw std::invalid_argument("sigma_sum: alpha must be >= 0");
    for (int v : r)
        if (v < 1) throw std::invalid_argument("sigma_sum: degrees must be positive");
    // (1 - qX) * prod_j (1 + X^(r_j) + X^(2 r_j) + ...) truncated at alpha
    std::vector<BigInt> a(static_cast<size_t>(alpha) + 1);
    a[0] = BigInt(1);
    if (alpha >= 1) a[1] = BigInt(-q);
    for (int rj : r)
        for (int i = rj; i <= alpha; ++i) a[static_cast<size_t>(i)] += a[static_cast<size_t>(i - rj)];
    return a[static_cast<size_t>(alpha)];
}

Rat phi_delta(const DegreeVector& r, int delta, int64_t q) {
    if (delta < 0) throw std::invalid_argument("phi_delta: delta must be >= 0");
    size_t n = r.size();
    if (n > 20) throw std::invalid_argument("phi_delta: too many degrees");
    Rat total(0);
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        int sig = 0, bits = 0;
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                sig += r[i];
                ++bits;
            }
        if (sig > delta) continue;
        Rat term(BigInt(bits % 2 ? -1 : 1), BigInt::pow(BigInt(q), sig));
        total += term;
    }
    return total;
}

namespace {
// Domain: beta odd, sum r even, sum r > beta (so L = (sum r - 1 - beta)/2 >= 0;
// beta = sum r - 1 has L = 0 and both forms equal -1).
void check_phi_cap_domain(const DegreeVector& r, int beta) {
    int s = sigma_of(r);
    if (beta % 2 == 0) throw std::invalid_argument("phi_cap: beta must be odd");
    if (s % 2 != 0) throw std::invalid_argument("phi_cap: sum of degrees must be even");
    if (beta >= s) throw std::invalid_argument("phi_cap: need beta < sum r");
}
}  // namespace

Rat phi_cap(const DegreeVector& r, int beta, int64_t q) {
    check_phi_cap_domain(r, beta);
    int L = (sigma_of(r) - 1 - beta) / 2;
    Rat total = Rat(-1) * Rat(BigInt::pow(BigInt(q), L), BigInt(1)) * phi_delta(r, L, q);
    Rat qm1(q - 1);
    for (int l = 0; l < L; ++l)
        total += qm1 * Rat(BigInt::pow(BigInt(q), l), BigInt(1)) * phi_delta(r, l, q);
    return total;
}

Rat phi_cap_subset_form(const DegreeVector& r, int beta, int64_t q) {
    check_phi_cap_domain(r, beta);
    (void)q;
    int L = (sigma_of(r) - 1 - beta) / 2;
    int64_t total = 0;
    size_t n = r.size();
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        int sig = 0, bits = 0;
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                sig += r[i];
                ++bits;
            }
        if (sig <= L) total += (bits % 2 ? -1 : 1);
    }
    return Rat(-total);
}

}  // namespace hyperell::combinat
