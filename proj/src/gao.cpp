#include "hyperell/gao.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hyperell/combinat.hpp"
#include "hyperell/util.hpp"

namespace hyperell::gao {

using testfn::QuadResult;
using testfn::TestFn;
using testfn::TransformGrid;

FnSet::FnSet(std::vector<TestFn> f) : fns(std::move(f)) {
    if (fns.empty()) throw std::invalid_argument("FnSet: empty");
    double s = testfn::sum_support(fns);
    if (s >= 2.0)
        throw std::invalid_argument("FnSet: support overflow (sum s_k = " + std::to_string(s) +
                                    " >= 2)");
}

namespace {

struct ValErr {
    double v = 0, e = 0;
};

// sum_{I subset M} (-1)^|I| region(I) over the given grids
ValErr signed_region_sum(const std::vector<const TransformGrid*>& grids) {
    int d = static_cast<int>(grids.size());
    ValErr out;
    for (uint32_t mask = 0; mask < (1u << d); ++mask) {
        std::vector<int> I;
        for (int i = 0; i < d; ++i)
            if (mask >> i & 1) I.push_back(i);
        QuadResult r = testfn::region_integral(I, grids);
        double sign = (I.size() % 2) ? -1.0 : 1.0;
        out.v += sign * r.value;
        out.e += r.err;
    }
    return out;
}

ValErr d_core(const std::vector<const TransformGrid*>& grids) {
    ValErr s = signed_region_sum(grids);
    double scale = std::ldexp(1.0, static_cast<int>(grids.size()) - 1);  // 2^(m-1)
    return {-scale * s.v, scale * s.e};
}

// Machinery shared by B_value and A_value: pair-sum recursion over a subset
// mask with memoization. pair_term(T) = 2^(|T|/2) sum_{pairings of T} prod
// of pair integrals (empty product = 1 at T = 0).
struct PairEngine {
    int m;
    std::vector<ValErr> pi;     // pair integral cache, index a*m+b
    std::vector<char> have_pi;
    std::vector<const TransformGrid*> grids;
    std::map<uint32_t, ValErr> memo;

    explicit PairEngine(std::vector<const TransformGrid*> g)
        : m(static_cast<int>(g.size())), pi(static_cast<size_t>(m) * m),
          have_pi(static_cast<size_t>(m) * m, 0), grids(std::move(g)) {}

    ValErr pair_int(int a, int b) {
        size_t idx = static_cast<size_t>(a) * m + b;
        if (!have_pi[idx]) {
            QuadResult r = testfn::pair_integral(*grids[static_cast<size_t>(a)],
                                                 *grids[static_cast<size_t>(b)]);
            pi[idx] = {r.value, r.err};
            have_pi[idx] = 1;
            pi[static_cast<size_t>(b) * m + a] = pi[idx];
            have_pi[static_cast<size_t>(b) * m + a] = 1;
        }
        return pi[idx];
    }

    ValErr pair_term(uint32_t mask) {
        int bits = __builtin_popcount(mask);
        if (bits % 2) return {0.0, 0.0};
        if (bits == 0) return {1.0, 0.0};
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int a = __builtin_ctz(mask);
        uint32_t rest = mask & ~(1u << a);
        ValErr total;
        for (int b = a + 1; b < m; ++b) {
            if (!(rest >> b & 1)) continue;
            ValErr p = pair_int(a, b);
            ValErr tail = pair_term(rest & ~(1u << b));
            total.v += 2.0 * p.v * tail.v;
            total.e += 2.0 * (std::abs(p.v) * tail.e + p.e * std::abs(tail.v));
        }
        memo.emplace(mask, total);
        return total;
    }
};

QuadResult finish(const ValErr& v) {
    QuadResult r;
    r.value = v.v;
    r.err = v.e;
    r.ok = true;
    return r;
}

}  // namespace

QuadResult D_value(const FnSet& us) {
    double h = testfn::default_grid_h(us.fns);
    std::vector<TransformGrid> grids;
    grids.reserve(us.fns.size());
    for (const auto& f : us.fns) grids.push_back(testfn::product_transform({f}, h));
    std::vector<const TransformGrid*> refs;
    for (const auto& g : grids) refs.push_back(&g);
    return finish(d_core(refs));
}

QuadResult B_value(const FnSet& us) {
    double h = testfn::default_grid_h(us.fns);
    std::vector<TransformGrid> grids;
    grids.reserve(us.fns.size());
    for (const auto& f : us.fns) grids.push_back(testfn::product_transform({f}, h));
    std::vector<const TransformGrid*> refs;
    for (const auto& g : grids) refs.push_back(&g);
    int m = us.size();
    PairEngine eng(refs);
    ValErr total = eng.pair_term((1u << m) - 1);
    for (uint32_t s = 0; s < (1u << m) - 1u; ++s) {  // proper subsets
        ValErr pt = eng.pair_term(s);
        if (pt.v == 0.0 && pt.e == 0.0) continue;
        std::vector<const TransformGrid*> comp;
        for (int i = 0; i < m; ++i)
            if (!(s >> i & 1)) comp.push_back(refs[static_cast<size_t>(i)]);
        ValErr dc = d_core(comp);
        total.v += pt.v * dc.v;
        total.e += std::abs(pt.v) * dc.e + pt.e * std::abs(dc.v);
    }
    return finish(total);
}

QuadResult A_value(const FnSet& fs) {
    int n = fs.size();
    if (n > 8) throw std::invalid_argument("A_value: n <= 8");
    double h = testfn::default_grid_h(fs.fns);

    // per-block data, memoized by the subset mask of {0..n-1}
    struct Block {
        TransformGrid grid;
        double uhat0 = 0, uhat0_err = 0;
        double u0 = 1;  // product of f_k(0)
    };
    std::map<uint32_t, Block> blocks;
    auto block_of = [&](uint32_t mask) -> Block& {
        auto it = blocks.find(mask);
        if (it != blocks.end()) return it->second;
        std::vector<TestFn> fnsub;
        for (int k = 0; k < n; ++k)
            if (mask >> k & 1) fnsub.push_back(fs.fns[static_cast<size_t>(k)]);
        Block b;
        b.grid = testfn::product_transform(fnsub, h);
        for (const auto& f : fnsub) b.u0 *= f.f(0.0);
        if (fnsub.size() == 1) {
            b.uhat0 = fnsub[0].fhat(0.0);
            b.uhat0_err = 0.0;
        } else {
            // whichever of the grid value and the time-side quadrature has the
            // smaller reported error, cross-checked against the other
            double gv = b.grid.at(0), ge = b.grid.err;
            QuadResult ts = testfn::time_side_product_integral(fnsub);
            if (std::abs(gv - ts.value) > 50.0 * (ge + ts.err) + 1e-9)
                throw AccuracyError("A_value: transform(0) cross-check failed");
            if (ts.err < ge) {
                b.uhat0 = ts.value;
                b.uhat0_err = ts.err;
            } else {
                b.uhat0 = gv;
                b.uhat0_err = ge;
            }
        }
        return blocks.emplace(mask, std::move(b)).first->second;
    };

    double total = 0.0, total_err = 0.0;
    for (const auto& part : combinat::partitions(n)) {
        auto blist = part.blocks();
        int nu = static_cast<int>(blist.size());
        double w = 1.0;
        for (int i = 0; i < n - nu; ++i) w *= -2.0;
        std::vector<uint32_t> bmask(static_cast<size_t>(nu), 0);
        for (int l = 0; l < nu; ++l) {
            int64_t fact = 1;
            const auto& b = blist[static_cast<size_t>(l)];
            for (size_t k = 2; k < b.size(); ++k) fact *= static_cast<int64_t>(k);
            w *= static_cast<double>(fact);
            for (int e : b) bmask[static_cast<size_t>(l)] |= (1u << e);
        }
        std::vector<const TransformGrid*> grids(static_cast<size_t>(nu));
        std::vector<double> uhat0(static_cast<size_t>(nu)), uhat0e(static_cast<size_t>(nu)),
            u0(static_cast<size_t>(nu));
        for (int l = 0; l < nu; ++l) {
            Block& b = block_of(bmask[static_cast<size_t>(l)]);
            grids[static_cast<size_t>(l)] = &b.grid;
            uhat0[static_cast<size_t>(l)] = b.uhat0;
            uhat0e[static_cast<size_t>(l)] = b.uhat0_err;
            u0[static_cast<size_t>(l)] = b.u0;
        }
        PairEngine eng(grids);
        std::map<uint32_t, ValErr> dsum_memo;
        auto dsum = [&](uint32_t mmask) -> ValErr {
            auto it = dsum_memo.find(mmask);
            if (it != dsum_memo.end()) return it->second;
            std::vector<const TransformGrid*> sub;
            for (int l = 0; l < nu; ++l)
                if (mmask >> l & 1) sub.push_back(grids[static_cast<size_t>(l)]);
            ValErr r = signed_region_sum(sub);
            dsum_memo.emplace(mmask, r);
            return r;
        };

        ValErr part_total;
        for (uint32_t smask = 0; smask < (1u << nu); ++smask) {
            double f1 = 1.0, f1e = 0.0;
            for (int l = 0; l < nu; ++l)
                if (!(smask >> l & 1)) {
                    f1e = std::abs(f1) * uhat0e[static_cast<size_t>(l)] +
                          f1e * std::abs(uhat0[static_cast<size_t>(l)]);
                    f1 *= uhat0[static_cast<size_t>(l)];
                }
            if (f1 == 0.0 && f1e == 0.0) continue;
            // iterate S2 as submask of S
            uint32_t s2 = smask;
            for (;;) {
                double f2 = 1.0;
                uint32_t s2c = smask & ~s2;
                for (int l = 0; l < nu; ++l)
                    if (s2c >> l & 1) f2 *= -0.5 * u0[static_cast<size_t>(l)];
                ValErr brace = eng.pair_term(s2);
                // - 1/2 sum over proper S3 of pairings times (-2)^{|S2\S3|} Dsum
                if (s2 != 0) {
                    uint32_t s3 = s2;
                    for (;;) {
                        s3 = (s3 - 1) & s2;  // proper submasks of s2, ending at 0
                        ValErr pt = eng.pair_term(s3);
                        if (pt.v != 0.0 || pt.e != 0.0) {
                            uint32_t mmask = s2 & ~s3;
                            int mbits = __builtin_popcount(mmask);
                            double c = -0.5 * std::ldexp((mbits % 2) ? -1.0 : 1.0, mbits);
                            ValErr ds = dsum(mmask);
                            brace.v += c * pt.v * ds.v;
                            brace.e += std::abs(c) * (std::abs(pt.v) * ds.e + pt.e * std::abs(ds.v));
                        }
                        if (s3 == 0) break;
                    }
                }
                part_total.v += f1 * f2 * brace.v;
                part_total.e += std::abs(f1 * f2) * brace.e +
                                (f1e * std::abs(f2)) * std::abs(brace.v);
                if (s2 == 0) break;
                s2 = (s2 - 1) & smask;
            }
        }
        total += w * part_total.v;
        total_err += std::abs(w) * part_total.e;
    }
    QuadResult r;
    r.value = total;
    r.err = total_err;
    r.ok = true;
    return r;
}

double a1_closed_form(const TestFn& fn) {
    double s = fn.support();
    double tail = 0.0;
    if (s > 1.0) tail = testfn::adaptive_gl([&](double u) { return fn.fhat(u); }, 1.0, s, 1e-12);
    return fn.fhat(0.0) - 0.5 * fn.f(0.0) + tail;
}

}  // namespace hyperell::gao
