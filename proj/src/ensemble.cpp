#include "hyperell/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hyperell/combinat.hpp"
#include "hyperell/util.hpp"

namespace hyperell::ensemble {

using exact::BigInt;
using exact::Rat;
using ffq::FieldOrder;
using ffq::MonicPoly;
using ffq::Poly;
using lfun::ScaledTraces;
using testfn::TestFn;

EnsembleSpec EnsembleSpec::exhaust(FieldOrder f, int g) {
    if (g < 1) throw std::invalid_argument("EnsembleSpec: g must be >= 1");
    EnsembleSpec s{std::move(f), g, true, 0, 0};
    check_budget(std::pow(static_cast<double>(s.field.q()), 2 * g + 1), "EnsembleSpec exhaustive");
    return s;
}

EnsembleSpec EnsembleSpec::sampled(FieldOrder f, int g, int64_t n, uint64_t seed) {
    if (g < 1) throw std::invalid_argument("EnsembleSpec: g must be >= 1");
    if (n < 1) throw std::invalid_argument("EnsembleSpec: sample count must be >= 1");
    return EnsembleSpec{std::move(f), g, false, n, seed};
}

int64_t ensemble_count(const FieldOrder& f, int g) {
    int64_t c = f.q() - 1;
    for (int i = 0; i < 2 * g; ++i) c *= f.q();
    return c;
}

MonicPoly sample_h(const FieldOrder& f, int g, uint64_t master_seed, uint64_t index) {
    // Per-sample stream: each rejection attempt consumes 2g+1 words.
    Rng rng(derive_seed(master_seed, index));
    int deg = 2 * g + 1;
    std::vector<int64_t> c(static_cast<size_t>(deg) + 1);
    for (;;) {
        for (int i = 0; i < deg; ++i) c[static_cast<size_t>(i)] = rng.next_mod(f.q());
        c[static_cast<size_t>(deg)] = 1;
        Poly h(f, c);
        if (ffq::is_squarefree(h)) return MonicPoly(h);
    }
}

void for_each_h(const EnsembleSpec& spec, const std::function<void(const MonicPoly&)>& fn) {
    if (spec.exhaustive) {
        ffq::enumerate_monic(spec.field, 2 * spec.g + 1, [&](const Poly& h) {
            if (ffq::is_squarefree(h)) fn(MonicPoly(h));
        });
    } else {
        for (int64_t i = 0; i < spec.n_samples; ++i)
            fn(sample_h(spec.field, spec.g, spec.master_seed, static_cast<uint64_t>(i)));
    }
}

exact::Rat avg_char(const Poly& f, const EnsembleSpec& spec) {
    if (!spec.exhaustive) throw std::invalid_argument("avg_char: exhaustive mode only");
    if (f.degree() >= 1 && !f.is_monic())
        throw std::invalid_argument("avg_char: f must be monic (or a nonzero constant)");
    if (f.is_zero()) throw std::invalid_argument("avg_char: f must be nonzero");
    const FieldOrder& fld = spec.field;
    int g = spec.g;
    int64_t count = ensemble_count(fld, g);

    int64_t direct = 0;
    for_each_h(spec, [&](const MonicPoly& h) { direct += lfun::chi(h, f); });

    // sieve side: sum over 2 alpha + beta = 2g+1 of the coprime Mobius sum
    // times the B-sum of (B/f)
    int64_t sieved = 0;
    for (int alpha = 0; 2 * alpha <= 2 * g + 1; ++alpha) {
        int beta = 2 * g + 1 - 2 * alpha;
        int64_t mob = 0;
        ffq::enumerate_monic(fld, alpha, [&](const Poly& a) {
            if (f.degree() >= 1 && !ffq::gcd(a, f).is_one()) return;
            mob += ffq::mobius_mu(MonicPoly(a));
        });
        if (mob == 0) continue;
        int64_t bsum = 0;
        if (f.degree() < 1) {
            int64_t qb = 1;
            for (int i = 0; i < beta; ++i) qb *= fld.q();
            bsum = qb;  // (B/1) = 1
        } else {
            ffq::enumerate_monic(fld, beta, [&](const Poly& b) { bsum += ffq::jacobi(b, f); });
        }
        sieved += mob * bsum;
    }
    if (direct * 1 != sieved)  // both integer forms of count * <chi>
        throw IdentityError("avg_char: direct sum " + std::to_string(direct) +
                            " != sieve expansion " + std::to_string(sieved) + " for f=" +
                            f.to_string());
    return Rat(BigInt(direct), BigInt(count));
}

namespace {

int needed_r_max(double support_sum, int g) {
    double lim = 2.0 * g * support_sum;
    int r = static_cast<int>(std::ceil(lim)) - 1;
    if (std::ceil(lim) == std::floor(lim)) r = static_cast<int>(lim) - 1;
    return std::max(r, 0);
}

// Discrete frequency-grid sequence of fhat samples at r/(2g), r = -R..R.
struct Seq {
    int R = 0;
    std::vector<double> v;  // index r + R
    double at(int r) const { return v[static_cast<size_t>(r + R)]; }
};

Seq sample_seq(const TestFn& fn, int g) {
    Seq s;
    s.R = needed_r_max(fn.support(), g);
    s.v.resize(static_cast<size_t>(2 * s.R) + 1);
    for (int r = -s.R; r <= s.R; ++r)
        s.v[static_cast<size_t>(r + s.R)] = fn.fhat(static_cast<double>(r) / (2.0 * g));
    return s;
}

Seq convolve_seq(const Seq& a, const Seq& b, double scale) {
    Seq out;
    out.R = a.R + b.R;
    out.v.assign(static_cast<size_t>(2 * out.R) + 1, 0.0);
    for (int i = -a.R; i <= a.R; ++i) {
        double ai = a.at(i) * scale;
        if (ai == 0.0) continue;
        for (int j = -b.R; j <= b.R; ++j) out.v[static_cast<size_t>(i + j + out.R)] += ai * b.at(j);
    }
    return out;
}

// Zero-sum of the product of periodized test functions over a block, from
// tau_r = tr Theta^r: Z = u[0] + (1/g) sum_{r>=1} u[r] tau_r where u is the
// discrete convolution of the sampled transforms with step 1/(2g).
double block_zero_sum(const std::vector<const TestFn*>& block, const std::vector<double>& tau,
                      int g) {
    Seq u = sample_seq(*block[0], g);
    for (size_t k = 1; k < block.size(); ++k)
        u = convolve_seq(u, sample_seq(*block[k], g), 1.0 / (2.0 * g));
    if (u.R > static_cast<int>(tau.size()))
        throw std::invalid_argument("nlevel: insufficient trace depth (need r_max >= " +
                                    std::to_string(u.R) + ")");
    double z = u.at(0);
    KahanSum acc;
    for (int r = 1; r <= u.R; ++r) acc.add(u.at(r) * tau[static_cast<size_t>(r - 1)]);
    return z + acc.value() / g;
}

void check_nlevel_args(const std::vector<TestFn>& fns, int n) {
    if (n < 1 || static_cast<int>(fns.size()) != n)
        throw std::invalid_argument("nlevel: need one test function per level");
    if (testfn::sum_support(fns) >= 2.0)
        throw std::invalid_argument("nlevel: support overflow (sum s_k >= 2)");
}

}  // namespace

double linear_stat(const ScaledTraces& st, const TestFn& tf, int g) {
    double s = tf.support();
    int rneed = needed_r_max(s, g);
    if (st.r_max() < rneed)
        throw std::invalid_argument("linear_stat: insufficient trace depth (have " +
                                    std::to_string(st.r_max()) + ", need " +
                                    std::to_string(rneed) + ")");
    double rq = std::sqrt(static_cast<double>(st.q));
    KahanSum acc;
    double scale = 1.0;
    for (int r = 1; r <= rneed; ++r) {
        scale /= rq;
        acc.add(scale * tf.fhat(static_cast<double>(r) / (2.0 * g)) *
                static_cast<double>(st.at(r) - st.lambda));
    }
    return tf.fhat(0.0) - acc.value() / g;
}

std::vector<double> tau_from_phases(const std::vector<double>& phases, int r_max) {
    std::vector<double> tau(static_cast<size_t>(r_max), 0.0);
    for (int r = 1; r <= r_max; ++r) {
        double s = 0;
        for (double th : phases) s += std::cos(r * th);
        tau[static_cast<size_t>(r - 1)] = 2.0 * s;
    }
    return tau;
}

double nlevel_direct(const std::vector<double>& phases, const std::vector<TestFn>& fns, int g,
                     int n) {
    check_nlevel_args(fns, n);
    int gp = static_cast<int>(phases.size());
    if (gp > 62) throw std::invalid_argument("nlevel_direct: too many phases");
    // ftilde_k(theta) = (1/2g)[fhat(0) + 2 sum_r fhat(r/2g) cos(r theta)]
    std::vector<std::vector<double>> ft(static_cast<size_t>(n),
                                        std::vector<double>(static_cast<size_t>(gp), 0.0));
    for (int k = 0; k < n; ++k) {
        int R = needed_r_max(fns[static_cast<size_t>(k)].support(), g);
        for (int m = 0; m < gp; ++m) {
            double v = fns[static_cast<size_t>(k)].fhat(0.0);
            for (int r = 1; r <= R; ++r)
                v += 2.0 * fns[static_cast<size_t>(k)].fhat(static_cast<double>(r) / (2.0 * g)) *
                     std::cos(r * phases[static_cast<size_t>(m)]);
            ft[static_cast<size_t>(k)][static_cast<size_t>(m)] = v / (2.0 * g);
        }
    }
    // 2^n * sum over ordered tuples of distinct unsigned indices
    double total = 0.0;
    std::function<void(int, uint64_t, double)> rec = [&](int k, uint64_t used, double prod) {
        if (k == n) {
            total += prod;
            return;
        }
        for (int m = 0; m < gp; ++m) {
            if (used >> m & 1) continue;
            rec(k + 1, used | (uint64_t{1} << m), prod * ft[static_cast<size_t>(k)][static_cast<size_t>(m)]);
        }
    };
    rec(0, 0, 1.0);
    return std::ldexp(total, n);
}

double nlevel_sieved_tau(const std::vector<double>& tau, const std::vector<TestFn>& fns, int g,
                         int n) {
    check_nlevel_args(fns, n);
    // memoized block zero-sums over subsets of {0..n-1}
    std::vector<double> zmemo(size_t{1} << n, 0.0);
    std::vector<bool> have(size_t{1} << n, false);
    auto zsum = [&](uint32_t mask) {
        if (have[mask]) return zmemo[mask];
        std::vector<const TestFn*> block;
        for (int k = 0; k < n; ++k)
            if (mask >> k & 1) block.push_back(&fns[static_cast<size_t>(k)]);
        double z = block_zero_sum(block, tau, g);
        zmemo[mask] = z;
        have[mask] = true;
        return z;
    };
    KahanSum total;
    for (const auto& part : combinat::partitions(n)) {
        auto blocks = part.blocks();
        double w = 1.0;
        int nu = static_cast<int>(blocks.size());
        for (int i = 0; i < n - nu; ++i) w *= -2.0;
        double prod = w;
        for (const auto& b : blocks) {
            int64_t fact = 1;
            for (size_t k = 2; k < b.size(); ++k) fact *= static_cast<int64_t>(k);
            uint32_t mask = 0;
            for (int e : b) mask |= (1u << e);
            prod *= static_cast<double>(fact) * zsum(mask);
        }
        total.add(prod);
    }
    return total.value();
}

double nlevel_sieved(const ScaledTraces& st, const std::vector<TestFn>& fns, int g, int n) {
    check_nlevel_args(fns, n);
    int rneed = needed_r_max(testfn::sum_support(fns), g);
    if (st.r_max() < rneed)
        throw std::invalid_argument("nlevel_sieved: insufficient trace depth");
    return nlevel_sieved_tau(lfun::unitarized_traces(st), fns, g, n);
}

double nlevel_sieved_phases(const std::vector<double>& phases, const std::vector<TestFn>& fns,
                            int g, int n) {
    check_nlevel_args(fns, n);
    int rneed = needed_r_max(testfn::sum_support(fns), g);
    return nlevel_sieved_tau(tau_from_phases(phases, rneed), fns, g, n);
}

AvgResult avg_nlevel(const EnsembleSpec& spec, const std::vector<TestFn>& fns, int n,
                     unsigned threads) {
    check_nlevel_args(fns, n);
    int g = spec.g;
    int rneed = needed_r_max(testfn::sum_support(fns), g);
    const FieldOrder& fld = spec.field;
    int64_t q = fld.q();

    // prime tables needed by the Euler-product star path (degree <= g)
    for (int d = 1; d <= g; ++d) ffq::primes_of_degree(d, fld);

    auto curve_value = [&](const MonicPoly& h) {
        lfun::StarData sd = lfun::star_data_fast(h);
        lfun::ScaledTraces st = lfun::traces_from_star(sd, rneed);
        return nlevel_sieved_tau(lfun::unitarized_traces(st), fns, g, n);
    };

    struct Partial {
        double sum = 0, c = 0, sumsq = 0, csq = 0;
        int64_t count = 0;
    };

    int deg = 2 * g + 1;
    AvgResult out;
    if (spec.exhaustive) {
        check_budget(std::pow(static_cast<double>(q), deg), "avg_nlevel exhaustive");
        int64_t space = 1;
        for (int i = 0; i < deg; ++i) space *= q;
        auto partials = run_chunks<Partial>(
            space, 8192, threads, [&](int64_t, int64_t begin, int64_t end) {
                Partial p;
                KahanSum s;
                std::vector<int64_t> c(static_cast<size_t>(deg) + 1, 0);
                c[static_cast<size_t>(deg)] = 1;
                for (int64_t idx = begin; idx < end; ++idx) {
                    int64_t rest = idx;
                    for (int i = 0; i < deg; ++i) {
                        c[static_cast<size_t>(i)] = rest % q;
                        rest /= q;
                    }
                    Poly h(fld, c);
                    if (!ffq::is_squarefree(h)) continue;
                    s.add(curve_value(MonicPoly(h)));
                    ++p.count;
                }
                p.sum = s.value();
                return p;
            });
        KahanSum total;
        int64_t count = 0;
        for (const auto& p : partials) {
            total.add(p.sum);
            count += p.count;
        }
        out.mean = total.value() / static_cast<double>(count);
        out.stderr_est = 0.0;
        out.count = count;
        return out;
    }

    auto partials = run_chunks<Partial>(
        spec.n_samples, 256, threads, [&](int64_t, int64_t begin, int64_t end) {
            Partial p;
            KahanSum s, s2;
            for (int64_t i = begin; i < end; ++i) {
                double v = curve_value(sample_h(fld, g, spec.master_seed, static_cast<uint64_t>(i)));
                s.add(v);
                s2.add(v * v);
                ++p.count;
            }
            p.sum = s.value();
            p.sumsq = s2.value();
            return p;
        });
    KahanSum total, totalsq;
    int64_t count = 0;
    for (const auto& p : partials) {
        total.add(p.sum);
        totalsq.add(p.sumsq);
        count += p.count;
    }
    double mean = total.value() / static_cast<double>(count);
    double var = (totalsq.value() / static_cast<double>(count) - mean * mean) *
                 static_cast<double>(count) / static_cast<double>(count - 1);
    out.mean = mean;
    out.stderr_est = std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    out.count = count;
    return out;
}

double diag_T(const ffq::MonicPoly& h, const TestFn& tf, int g) {
    int rneed = needed_r_max(tf.support(), g);
    check_budget(std::pow(static_cast<double>(h.q()), std::max(rneed, 1)), "diag_T");
    double rq = std::sqrt(static_cast<double>(h.q()));
    KahanSum acc;
    double scale = 1.0;
    for (int r = 1; r <= rneed; ++r) {
        scale /= rq;
        int64_t psum = 0;
        for (const auto& p : ffq::primes_of_degree(r, h.field()))
            psum += ffq::jacobi(h.poly(), p.poly());
        acc.add(static_cast<double>(r) * scale * tf.fhat(static_cast<double>(r) / (2.0 * g)) *
                static_cast<double>(psum));
    }
    return acc.value() / g;
}

double prime_power_remainder(const ffq::MonicPoly& h, const TestFn& tf, int g) {
    int rneed = needed_r_max(tf.support(), g);
    check_budget(std::pow(static_cast<double>(h.q()), std::max(rneed, 1)), "prime_power_remainder");
    lfun::ScaledTraces st = lfun::scaled_traces(h, std::max(rneed, 1));
    double rq = std::sqrt(static_cast<double>(h.q()));
    KahanSum acc;
    double scale = 1.0;
    for (int r = 1; r <= rneed; ++r) {
        scale /= rq;
        int64_t psum = 0;
        for (const auto& p : ffq::primes_of_degree(r, h.field()))
            psum += ffq::jacobi(h.poly(), p.poly());
        int64_t rem = st.at(r) - static_cast<int64_t>(r) * psum;
        acc.add(scale * tf.fhat(static_cast<double>(r) / (2.0 * g)) * static_cast<double>(rem));
    }
    return acc.value() / g;
}

}  // namespace hyperell::ensemble
