#include "hyperell/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "hyperell/util.hpp"

namespace hyperell::lfun {

using ffq::MonicPoly;
using ffq::Poly;

int chi(const MonicPoly& D, const Poly& f) {
    if (D.degree() < 1) throw std::invalid_argument("chi: deg D must be >= 1");
    if (f.degree() < 1) return f.is_zero() ? 0 : 1;
    return ffq::jacobi(D.poly(), f);
}

LPolynomial l_coeffs(const MonicPoly& D) {
    int d = D.degree();
    if (d < 1) throw std::invalid_argument("l_coeffs: deg D must be >= 1");
    if (ffq::is_perfect_square(D.poly()))
        throw std::invalid_argument("l_coeffs: D is a perfect square: " + D.to_string());
    check_budget(std::pow(static_cast<double>(D.q()), d), "l_coeffs");
    LPolynomial lp{D, std::vector<int64_t>(static_cast<size_t>(d), 0)};
    for (int beta = 0; beta < d; ++beta) {
        int64_t s = 0;
        ffq::enumerate_monic(D.field(), beta, [&](const Poly& b) { s += chi(D, b); });
        lp.A[static_cast<size_t>(beta)] = s;
    }
    return lp;
}

std::vector<int64_t> l_coeffs_euler(const MonicPoly& D, int up_to) {
    if (D.degree() < 1) throw std::invalid_argument("l_coeffs_euler: deg D must be >= 1");
    std::vector<int64_t> a(static_cast<size_t>(up_to) + 1, 0);
    a[0] = 1;
    for (int d = 1; d <= up_to; ++d) {
        for (const auto& P : ffq::primes_of_degree(d, D.field())) {
            int eps = ffq::jacobi(D.poly(), P.poly());
            if (!eps) continue;
            for (int i = d; i <= up_to; ++i)
                a[static_cast<size_t>(i)] += eps * a[static_cast<size_t>(i - d)];
        }
    }
    return a;
}

namespace {

int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void check_functional_equation(const StarData& sd) {
    int64_t q = sd.q();
    int twod = 2 * sd.delta;
    if (sd.Astar.at(0) != 1)
        throw IdentityError("functional equation: A*(0) != 1 for D=" + sd.D.to_string());
    for (int b = 0; b <= sd.delta; ++b) {
        int64_t lhs = sd.Astar.at(static_cast<size_t>(twod - b));
        int64_t rhs = ipow(q, sd.delta - b) * sd.Astar.at(static_cast<size_t>(b));
        if (lhs != rhs)
            throw IdentityError("functional equation violated at beta=" + std::to_string(b) +
                                " for D=" + sd.D.to_string());
    }
}

}  // namespace

StarData star_reduce(const LPolynomial& lp) {
    int d = lp.D.degree();
    StarData sd{lp.D, d % 2 == 0 ? 1 : 0, 0, {}};
    sd.delta = (d - 1 - sd.lambda) / 2;
    if (sd.lambda == 0) {
        sd.Astar = lp.A;
    } else {
        // L = (1-u) L*  =>  A*(beta) = A(0) + ... + A(beta)
        int64_t total = 0;
        for (int64_t v : lp.A) total += v;
        if (total != 0)
            throw IdentityError("star_reduce: missing trivial zero at u=1 for D=" +
                                lp.D.to_string() + " (non-squarefree D?)");
        sd.Astar.resize(lp.A.size() - 1);
        int64_t acc = 0;
        for (size_t b = 0; b + 1 < lp.A.size(); ++b) {
            acc += lp.A[b];
            sd.Astar[b] = acc;
        }
    }
    if (static_cast<int>(sd.Astar.size()) != 2 * sd.delta + 1)
        throw IdentityError("star_reduce: degree mismatch for D=" + lp.D.to_string());
    check_functional_equation(sd);
    return sd;
}

StarData star_data_fast(const MonicPoly& D) {
    int d = D.degree();
    if (d < 1) throw std::invalid_argument("star_data_fast: deg D must be >= 1");
    StarData sd{D, d % 2 == 0 ? 1 : 0, 0, {}};
    sd.delta = (d - 1 - sd.lambda) / 2;
    std::vector<int64_t> A = l_coeffs_euler(D, sd.delta);
    sd.Astar.assign(static_cast<size_t>(2 * sd.delta) + 1, 0);
    int64_t acc = 0;
    for (int b = 0; b <= sd.delta; ++b) {
        acc = sd.lambda ? acc + A[static_cast<size_t>(b)] : A[static_cast<size_t>(b)];
        sd.Astar[static_cast<size_t>(b)] = acc;
    }
    int64_t q = D.q();
    for (int b = sd.delta + 1; b <= 2 * sd.delta; ++b)
        sd.Astar[static_cast<size_t>(b)] =
            ipow(q, b - sd.delta) * sd.Astar[static_cast<size_t>(2 * sd.delta - b)];
    return sd;
}

ScaledTraces scaled_traces(const MonicPoly& h, int r_max) {
    int d = h.degree();
    if (d < 3 || d % 2 == 0)
        throw std::invalid_argument("scaled_traces: deg h must be odd and >= 3");
    if (!ffq::is_squarefree(h.poly()))
        throw std::invalid_argument("scaled_traces: h must be squarefree");
    check_budget(2.0 * std::pow(static_cast<double>(h.q()), r_max), "scaled_traces");
    ScaledTraces st{h.q(), (d - 1) / 2, 0, std::vector<int64_t>(static_cast<size_t>(r_max), 0)};
    for (int r = 1; r <= r_max; ++r) {
        int64_t c = 0;
        for (int dd = 1; dd <= r; ++dd) {
            if (r % dd) continue;
            int k = r / dd;
            for (const auto& P : ffq::primes_of_degree(dd, h.field())) {
                int t = ffq::jacobi(h.poly(), P.poly());
                int64_t term = (k % 2 == 0) ? (t != 0 ? 1 : 0) : t;
                c += dd * term;
            }
        }
        st.c[static_cast<size_t>(r - 1)] = c;
    }
    return st;
}

ScaledTraces traces_from_star(const StarData& sd, int r_max) {
    // Newton's identities on L*(u) = sum A*(b) u^b give the power sums p_r of
    // its inverse roots; c_r = -p_r = -q^(r/2) tr Theta^r exactly.
    int twod = 2 * sd.delta;
    std::vector<int64_t> p(static_cast<size_t>(r_max) + 1, 0);
    for (int r = 1; r <= r_max; ++r) {
        int64_t s = 0;
        if (r <= twod) s = -static_cast<int64_t>(r) * sd.Astar[static_cast<size_t>(r)];
        for (int i = 1; i < r && i <= twod; ++i)
            s -= sd.Astar[static_cast<size_t>(i)] * p[static_cast<size_t>(r - i)];
        p[static_cast<size_t>(r)] = s;
    }
    int g = sd.D.degree() % 2 ? (sd.D.degree() - 1) / 2 : sd.delta;
    ScaledTraces st{sd.q(), g, sd.lambda, std::vector<int64_t>(static_cast<size_t>(r_max), 0)};
    for (int r = 1; r <= r_max; ++r) st.c[static_cast<size_t>(r - 1)] = -p[static_cast<size_t>(r)];
    return st;
}

std::vector<double> unitarized_traces(const ScaledTraces& st) {
    std::vector<double> tau(st.c.size());
    double rq = std::sqrt(static_cast<double>(st.q));
    double scale = 1.0;
    for (size_t i = 0; i < st.c.size(); ++i) {
        scale /= rq;
        tau[i] = -scale * static_cast<double>(st.c[i]);
    }
    return tau;
}

namespace {

using cplx = std::complex<double>;

cplx horner(const std::vector<double>& c, cplx z) {
    cplx v(0.0, 0.0);
    for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

// Aberth-Ehrlich simultaneous iteration; coefficients real, roots returned
// unordered. Converges fast for the well-separated near-unit-circle roots of
// normalized L-polynomials.
bool aberth(const std::vector<double>& c, std::vector<cplx>& z, int max_iter) {
    size_t n = c.size() - 1;
    std::vector<double> dc(n);
    for (size_t i = 1; i <= n; ++i) dc[i - 1] = c[i] * static_cast<double>(i);
    for (int it = 0; it < max_iter; ++it) {
        double worst = 0.0;
        for (size_t i = 0; i < n; ++i) {
            cplx p = horner(c, z[i]);
            cplx dp = horner(dc, z[i]);
            if (std::abs(dp) < 1e-300) {
                z[i] += cplx(1e-8, 1e-8);
                worst = 1.0;
                continue;
            }
            cplx nrat = p / dp;
            cplx s(0.0, 0.0);
            for (size_t j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[i] - z[j]);
            cplx w = nrat / (1.0 - nrat * s);
            z[i] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[i])));
        }
        if (worst < 1e-12) return true;
    }
    return false;
}

}  // namespace

Eigenphases eigenphases(const StarData& sd, double rh_tol) {
    int n = 2 * sd.delta;
    Eigenphases out;
    if (n == 0) return out;
    // Normalized variable z = u sqrt(q): coefficients A*(b) q^(-b/2), monic by
    // the functional equation.
    std::vector<double> c(static_cast<size_t>(n) + 1);
    double rq = std::sqrt(static_cast<double>(sd.q()));
    double scale = 1.0;
    for (int b = 0; b <= n; ++b) {
        c[static_cast<size_t>(b)] = static_cast<double>(sd.Astar[static_cast<size_t>(b)]) * scale;
        scale /= rq;
    }
    std::vector<cplx> z(static_cast<size_t>(n));
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
        Rng rng(0xABE27Full + static_cast<uint64_t>(attempt));
        for (int k = 0; k < n; ++k) {
            double ang = 2.0 * M_PI * (k + 0.26) / n + 0.01 * rng.next_double();
            double rad = 0.92 + 0.05 * rng.next_double();
            z[static_cast<size_t>(k)] = std::polar(rad, ang);
        }
        ok = aberth(c, z, 500);
    }
    if (!ok) {
        // Fallback for the on-circle case: the normalized polynomial is
        // palindromic, so e^(-i delta phi) L*(e^(i phi)/sqrt(q)) is a real
        // cosine polynomial whose zeros in (0,pi) are the eigenphases.
        int delta = sd.delta;
        auto T = [&](double phi) {
            double v = c[static_cast<size_t>(delta)];
            for (int k = 1; k <= delta; ++k)
                v += 2.0 * c[static_cast<size_t>(delta + k)] * std::cos(k * phi);
            return v;
        };
        std::vector<double> roots;
        int samples = 512 * std::max(1, delta);
        double prev = T(0.0), prev_phi = 0.0;
        for (int i = 1; i <= samples; ++i) {
            double phi = M_PI * i / samples;
            double cur = T(phi);
            if ((prev < 0) != (cur < 0)) {
                double lo = prev_phi, hi = phi;
                for (int b = 0; b < 100; ++b) {
                    double mid = 0.5 * (lo + hi);
                    if ((T(lo) < 0) != (T(mid) < 0))
                        hi = mid;
                    else
                        lo = mid;
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev = cur;
            prev_phi = phi;
        }
        if (static_cast<int>(roots.size()) != delta)
            throw AccuracyError("eigenphases: root finding failed for D=" + sd.D.to_string());
        out.theta = roots;
        out.residual = 0.0;
        std::sort(out.theta.begin(), out.theta.end());
        return out;
    }
    double residual = 0.0;
    for (auto& zi : z) residual = std::max(residual, std::abs(std::abs(zi) - 1.0));
    if (residual > rh_tol)
        throw AccuracyError("eigenphases: normalized root off the unit circle, residual " +
                            std::to_string(residual) + " for D=" + sd.D.to_string());
    // Roots come in conjugate pairs z = e^(-i theta), e^(+i theta); fold and pair.
    std::vector<double> folded(z.size());
    for (size_t i = 0; i < z.size(); ++i) folded[i] = std::abs(std::arg(z[i]));
    std::sort(folded.begin(), folded.end());
    out.theta.resize(static_cast<size_t>(sd.delta));
    for (int j = 0; j < sd.delta; ++j)
        out.theta[static_cast<size_t>(j)] =
            0.5 * (folded[static_cast<size_t>(2 * j)] + folded[static_cast<size_t>(2 * j + 1)]);
    out.residual = residual;
    return out;
}

std::string star_record(const StarData& sd) {
    std::string s = std::to_string(sd.q()) + "," + sd.D.to_string() + "," +
                    std::to_string(sd.lambda) + "," + std::to_string(sd.delta);
    for (int64_t a : sd.Astar) s += "," + std::to_string(a);
    return s;
}

}  // namespace hyperell::lfun
