#include "hyperell/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hyperell/util.hpp"

namespace hyperell::charsum {

using combinat::DegreeVector;
using exact::BigInt;
using exact::Rat;
using ffq::FieldOrder;
using ffq::MonicPoly;
using ffq::Poly;

HalfPowerValue HalfPowerValue::make(Rat base, int neg_half_exponent, int64_t q) {
    if (neg_half_exponent < 0) throw std::invalid_argument("HalfPowerValue: negative exponent");
    HalfPowerValue v;
    v.q = q;
    v.e = neg_half_exponent % 2;
    int k = neg_half_exponent / 2;
    v.c = base / Rat(BigInt::pow(BigInt(q), k), BigInt(1));
    if (v.c.is_zero()) v.e = 0;
    return v;
}

double HalfPowerValue::to_double() const {
    double x = c.to_double();
    if (e) x /= std::sqrt(static_cast<double>(q));
    return x;
}

std::string HalfPowerValue::to_string() const {
    std::string s = c.to_string();
    if (e) s += " * q^(-1/2), q=" + std::to_string(q);
    return s;
}

namespace {

struct DegreeClass {
    int degree;
    int multiplicity;
    std::vector<combinat::SetPartition> slot_partitions;  // partitions of the slots
};

std::vector<DegreeClass> group_degrees(const DegreeVector& r) {
    std::map<int, int> mult;
    for (int d : r) {
        if (d < 1) throw std::invalid_argument("degrees must be positive");
        ++mult[d];
    }
    std::vector<DegreeClass> out;
    for (auto [d, m] : mult)
        out.push_back(DegreeClass{d, m, combinat::partitions(m)});
    return out;
}

// Sum over ordered tuples of DISTINCT primes within one degree class of the
// product of per-prime symbol values, from the power sums p_k = sum_P t_P^k
// via the partition Mobius function.
int64_t injective_class_sum(const DegreeClass& cls, const std::vector<int>& symbols) {
    // t in {-1,0,1}: p_k = (# nonzero) for even k, sum t for odd k
    int64_t p_odd = 0, p_even = 0;
    for (int t : symbols) {
        p_odd += t;
        p_even += t != 0;
    }
    int64_t total = 0;
    for (const auto& part : cls.slot_partitions) {
        int64_t term = combinat::partition_mobius(part);
        for (const auto& block : part.blocks())
            term *= (block.size() % 2 == 0) ? p_even : p_odd;
        total += term;
    }
    return total;
}

}  // namespace

int64_t injective_symbol_sum(const Poly& top, const DegreeVector& r) {
    static thread_local std::map<std::pair<int64_t, std::vector<int>>, std::vector<DegreeClass>>
        class_cache;
    DegreeVector sorted = r;
    std::sort(sorted.begin(), sorted.end());
    auto key = std::make_pair(top.q(), sorted);
    auto it = class_cache.find(key);
    if (it == class_cache.end()) it = class_cache.emplace(key, group_degrees(r)).first;
    int64_t prod = 1;
    std::vector<int> symbols;
    for (const auto& cls : it->second) {
        const auto& primes = ffq::primes_of_degree(cls.degree, top.field());
        symbols.clear();
        symbols.reserve(primes.size());
        for (const auto& p : primes) symbols.push_back(ffq::jacobi(top, p.poly()));
        prod *= injective_class_sum(cls, symbols);
        if (prod == 0) return 0;
    }
    return prod;
}

int64_t tuple_count(const DegreeVector& r, const FieldOrder& f) {
    std::map<int, int> mult;
    for (int d : r) ++mult[d];
    int64_t total = 1;
    for (auto [d, m] : mult) {
        int64_t pi = ffq::prime_count(d, f);
        for (int k = 0; k < m; ++k) total *= (pi - k);
    }
    return std::max<int64_t>(total, 0);
}

int64_t S_brute(int beta, const DegreeVector& r, const FieldOrder& f) {
    if (beta < 0) throw std::invalid_argument("S_brute: beta must be >= 0");
    // cost model: the injective sums need sum_j pi(r_j) symbol evaluations
    // per B, not the naive prod_j pi(r_j)
    double pi_sum = 0.0;
    for (int d : r) pi_sum += static_cast<double>(ffq::prime_count(d, f));
    check_budget(std::pow(static_cast<double>(f.q()), beta) * pi_sum, "S_brute");
    for (int d : r) ffq::primes_of_degree(d, f);  // warm the caches before forking
    int64_t q = f.q();
    int64_t space = 1;
    for (int i = 0; i < beta; ++i) space *= q;
    auto partials =
        run_chunks<int64_t>(space, 2048, 0, [&](int64_t, int64_t begin, int64_t end) {
            int64_t sub = 0;
            std::vector<int64_t> c(static_cast<size_t>(beta) + 1, 0);
            c[static_cast<size_t>(beta)] = 1;
            for (int64_t idx = begin; idx < end; ++idx) {
                int64_t rest = idx;
                for (int i = 0; i < beta; ++i) {
                    c[static_cast<size_t>(i)] = rest % q;
                    rest /= q;
                }
                sub += injective_symbol_sum(Poly(f, c), r);
            }
            return sub;
        });
    int64_t total = 0;
    for (int64_t p : partials) total += p;
    return total;
}

exact::BigInt S_eval(int beta, const DegreeVector& r, const FieldOrder& f,
                     double direct_cost_limit, unsigned threads) {
    (void)threads;
    int s = combinat::sigma_of(r);
    if (beta >= s) return BigInt(0);
    double pi_sum = 0;
    for (int d : r) pi_sum += static_cast<double>(ffq::prime_count(d, f));
    double cost = std::pow(static_cast<double>(f.q()), beta) * pi_sum;
    if (beta <= (s - 1) / 2 || cost <= direct_cost_limit) return BigInt(S_brute(beta, r, f));
    BigInt q(f.q());
    if (s % 2 == 1) {
        // S(beta) = q^(beta - (s-1)/2) S(s-1-beta)
        return BigInt::pow(q, beta - (s - 1) / 2) * S_eval(s - 1 - beta, r, f, direct_cost_limit);
    }
    if (beta == s - 1) {
        // exact top coefficient: each ordered distinct tuple contributes
        // -q^((s-2)/2)
        return BigInt(-1) * BigInt::pow(q, (s - 2) / 2) * BigInt(tuple_count(r, f));
    }
    // S(beta) = q^(beta - s/2) (-S(s-1-beta) + (q-1) sum_{l <= s-2-beta} S(l))
    BigInt acc(0);
    for (int l = 0; l <= s - 2 - beta; ++l) acc += S_eval(l, r, f, direct_cost_limit);
    BigInt core = BigInt(-1) * S_eval(s - 1 - beta, r, f, direct_cost_limit) +
                  BigInt(f.q() - 1) * acc;
    return BigInt::pow(q, beta - s / 2) * core;
}

HalfPowerValue avg_P_via_sums(const DegreeVector& r, const FieldOrder& f, int g,
                              unsigned threads) {
    (void)threads;
    int64_t q = f.q();
    BigInt rraw(0);
    for (int alpha = 0; alpha <= g; ++alpha)
        rraw += combinat::sigma_sum(r, alpha, q) * S_eval(2 * g + 1 - 2 * alpha, r, f);
    BigInt rprod(1);
    for (int d : r) rprod *= BigInt(d);
    BigInt count = BigInt(q - 1) * BigInt::pow(BigInt(q), 2 * g);
    int s = combinat::sigma_of(r);
    return HalfPowerValue::make(Rat(rprod, count) * Rat(rraw, BigInt(1)), s, q);
}

namespace {

int64_t ipow64(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

DualityReport make_report(const BigInt& lhs, const BigInt& rhs, const std::string& what) {
    DualityReport rep{lhs, rhs, lhs == rhs, what};
    if (!rep.ok)
        rep.detail += ": MISMATCH lhs=" + lhs.to_string() + " rhs=" + rhs.to_string();
    return rep;
}

}  // namespace

DualityReport duality_check_odd(int beta, const DegreeVector& r, const FieldOrder& f) {
    int s = combinat::sigma_of(r);
    if (s % 2 == 0) throw std::invalid_argument("duality_check_odd: sum r must be odd");
    if (beta > s - 1) throw std::invalid_argument("duality_check_odd: need beta <= sum r - 1");
    BigInt a(S_brute(beta, r, f));
    BigInt b(S_brute(s - 1 - beta, r, f));
    int e = (s - 1) / 2 - beta;
    BigInt lhs, rhs;
    if (e >= 0) {
        lhs = a * BigInt::pow(BigInt(f.q()), e);
        rhs = b;
    } else {
        lhs = a;
        rhs = b * BigInt::pow(BigInt(f.q()), -e);
    }
    return make_report(lhs, rhs,
                       "duality_odd beta=" + std::to_string(beta) + " q=" + std::to_string(f.q()));
}

DualityReport top_coeff_even(const DegreeVector& r, const FieldOrder& f) {
    int s = combinat::sigma_of(r);
    if (s % 2) throw std::invalid_argument("top_coeff_even: sum r must be even");
    BigInt lhs(S_brute(s - 1, r, f));
    BigInt rhs = BigInt(-1) * BigInt::pow(BigInt(f.q()), (s - 2) / 2) * BigInt(tuple_count(r, f));
    return make_report(lhs, rhs, "top_coeff_even q=" + std::to_string(f.q()));
}

DualityReport duality_check_even(int beta, const DegreeVector& r, const FieldOrder& f) {
    int s = combinat::sigma_of(r);
    if (s % 2) throw std::invalid_argument("duality_check_even: sum r must be even");
    if (beta > s - 2) throw std::invalid_argument("duality_check_even: need beta <= sum r - 2");
    BigInt a(S_brute(beta, r, f));
    BigInt dual(S_brute(s - 1 - beta, r, f));
    BigInt acc(0);
    for (int l = 0; l <= s - 2 - beta; ++l) acc += BigInt(S_brute(l, r, f));
    BigInt rhs_core = BigInt(-1) * dual + BigInt(f.q() - 1) * acc;
    int e = s / 2 - beta;
    BigInt lhs, rhs;
    if (e >= 0) {
        lhs = a * BigInt::pow(BigInt(f.q()), e);
        rhs = rhs_core;
    } else {
        lhs = a;
        rhs = rhs_core * BigInt::pow(BigInt(f.q()), -e);
    }
    return make_report(lhs, rhs,
                       "duality_even beta=" + std::to_string(beta) + " q=" + std::to_string(f.q()));
}

AvePResult avg_P_exact(const DegreeVector& r, const FieldOrder& f, int g) {
    int64_t q = f.q();
    int deg = 2 * g + 1;
    double pi_sum = 0.0;
    for (int d : r) pi_sum += static_cast<double>(ffq::prime_count(d, f));
    check_budget(std::pow(static_cast<double>(q), deg) * pi_sum, "avg_P_exact");

    // LHS raw integer: sum over squarefree h of the ordered-distinct tuple sum
    int64_t lraw = 0;
    ffq::enumerate_monic(f, deg, [&](const Poly& h) {
        if (!ffq::is_squarefree(h)) return;
        lraw += injective_symbol_sum(h, r);
    });

    // RHS raw integer: sum_alpha sigma(r; alpha) S(2g+1-2alpha; r)
    BigInt rraw(0);
    for (int alpha = 0; alpha <= g; ++alpha)
        rraw += combinat::sigma_sum(r, alpha, q) * BigInt(S_brute(deg - 2 * alpha, r, f));

    int64_t count = (q - 1) * ipow64(q, 2 * g);
    BigInt rprod(1);
    for (int d : r) rprod *= BigInt(d);
    int s = combinat::sigma_of(r);
    Rat prefactor(rprod, BigInt(count));
    AvePResult res;
    res.lhs = HalfPowerValue::make(prefactor * Rat(BigInt(lraw), BigInt(1)), s, q);
    res.rhs = HalfPowerValue::make(prefactor * Rat(rraw, BigInt(1)), s, q);
    res.equal = res.lhs == res.rhs;
    return res;
}

PredictedP avg_P_predicted(const DegreeVector& r, int64_t q, int g, double delta) {
    (void)q;
    int s = combinat::sigma_of(r);
    if (!(s < 4.0 * g * (1.0 - delta)))
        throw std::invalid_argument("avg_P_predicted: need sum r < 4g(1-delta)");
    PredictedP out;
    if (s < 2 * g) {
        out.label = PredictedCase::zero;
        return out;
    }
    if (s == 2 * g || s == 2 * g + 2) {
        out.label = PredictedCase::bounded;
        return out;
    }
    if (s % 2 == 1) {
        out.label = PredictedCase::zero;
        return out;
    }
    // sum r > 2g + 2 and even: check the exceptional hyperplanes
    size_t n = r.size();
    int64_t main = 0;
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        int sig = 0, bits = 0;
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) {
                sig += r[i];
                ++bits;
            }
        int sig_c = s - sig;
        if (sig_c - sig == 2 * g) {
            out.label = PredictedCase::bounded;
            return out;
        }
        if (sig < sig_c - 2 * g) main += (bits % 2 ? -1 : 1);
    }
    out.main = Rat(-main);
    out.label = PredictedCase::generic;
    return out;
}

}  // namespace hyperell::charsum
