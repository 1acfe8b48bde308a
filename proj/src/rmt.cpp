#include "hyperell/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperell/util.hpp"

namespace hyperell::rmt {

using cplx = std::complex<double>;
using ensemble::AvgResult;
using testfn::QuadResult;
using testfn::TestFn;

CMatrix matmul(const CMatrix& x, const CMatrix& y) {
    if (x.n != y.n) throw std::invalid_argument("matmul: size mismatch");
    CMatrix z(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            cplx v = x.at(i, k);
            if (v == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < x.n; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

cplx det(CMatrix m) {
    cplx d(1.0, 0.0);
    for (int c = 0; c < m.n; ++c) {
        int piv = c;
        for (int r = c + 1; r < m.n; ++r)
            if (std::abs(m.at(r, c)) > std::abs(m.at(piv, c))) piv = r;
        if (std::abs(m.at(piv, c)) == 0.0) return cplx(0.0, 0.0);
        if (piv != c) {
            for (int j = 0; j < m.n; ++j) std::swap(m.at(piv, j), m.at(c, j));
            d = -d;
        }
        d *= m.at(c, c);
        cplx inv = 1.0 / m.at(c, c);
        for (int r = c + 1; r < m.n; ++r) {
            cplx f = m.at(r, c) * inv;
            if (f == cplx(0.0, 0.0)) continue;
            for (int j = c; j < m.n; ++j) m.at(r, j) -= f * m.at(c, j);
        }
    }
    return d;
}

cplx trace(const CMatrix& m) {
    cplx t(0.0, 0.0);
    for (int i = 0; i < m.n; ++i) t += m.at(i, i);
    return t;
}

namespace {

struct Quat {
    double w = 0, x = 0, y = 0, z = 0;
    friend Quat operator+(const Quat& a, const Quat& b) {
        return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend Quat operator-(const Quat& a, const Quat& b) {
        return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Quat operator*(const Quat& a, const Quat& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }
    Quat conj() const { return {w, -x, -y, -z}; }
    double norm2() const { return w * w + x * x + y * y + z * z; }
    Quat scaled(double s) const { return {w * s, x * s, y * s, z * s}; }
};

}  // namespace

CMatrix standard_j(int g) {
    CMatrix j(2 * g);
    for (int b = 0; b < g; ++b) {
        j.at(2 * b, 2 * b + 1) = cplx(1.0, 0.0);
        j.at(2 * b + 1, 2 * b) = cplx(-1.0, 0.0);
    }
    return j;
}

CMatrix haar_usp(int g, uint64_t seed) {
    if (g < 1 || g > 64) throw std::invalid_argument("haar_usp: need 1 <= g <= 64");
    Rng rng(seed);
    // i.i.d. quaternion Gaussian matrix, columns orthonormalized over H with
    // quaternion-valued projection coefficients. The normalization divisor is
    // the real norm, so the decomposition carries no residual phase freedom;
    // a unit-phase normalization here would break Haar-ness.
    std::vector<Quat> m(static_cast<size_t>(g) * g);
    auto at = [&](int i, int j) -> Quat& { return m[static_cast<size_t>(i) * g + j]; };
    for (auto& qv : m)
        qv = Quat{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(),
                  rng.next_gaussian()};
    for (int k = 0; k < g; ++k) {
        for (int j = 0; j < k; ++j) {
            Quat c{0, 0, 0, 0};
            for (int i = 0; i < g; ++i) c = c + at(i, j).conj() * at(i, k);
            for (int i = 0; i < g; ++i) at(i, k) = at(i, k) - at(i, j) * c;
        }
        double nrm2 = 0;
        for (int i = 0; i < g; ++i) nrm2 += at(i, k).norm2();
        double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < g; ++i) at(i, k) = at(i, k).scaled(inv);
    }
    // embed each quaternion a + b j (a = w + xi, b = y + zi) as
    // ((a, b), (-conj b, conj a))
    CMatrix u(2 * g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            const Quat& qv = at(i, j);
            cplx a(qv.w, qv.x), b(qv.y, qv.z);
            u.at(2 * i, 2 * j) = a;
            u.at(2 * i, 2 * j + 1) = b;
            u.at(2 * i + 1, 2 * j) = -std::conj(b);
            u.at(2 * i + 1, 2 * j + 1) = std::conj(a);
        }
    return u;
}

double residual_unitary(const CMatrix& u) {
    double worst = 0;
    for (int i = 0; i < u.n; ++i)
        for (int j = 0; j < u.n; ++j) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < u.n; ++k) s += u.at(i, k) * std::conj(u.at(j, k));
            if (i == j) s -= 1.0;
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

double residual_symplectic(const CMatrix& u) {
    int g = u.n / 2;
    CMatrix j = standard_j(g);
    // U^T J U - J
    double worst = 0;
    for (int a = 0; a < u.n; ++a)
        for (int b = 0; b < u.n; ++b) {
            cplx s(0.0, 0.0);
            for (int k = 0; k < u.n; ++k) {
                // (U^T J)_{a,k}: J has one entry per row
                cplx jk = j.at(k, k ^ 1);
                // J_{k, k^1} nonzero only; (U^T)_{a,k} = U_{k,a}
                s += u.at(k, a) * jk * u.at(k ^ 1, b);
            }
            s -= j.at(a, b);
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

namespace {

// Householder tridiagonalization of a Hermitian matrix followed by a phase
// similarity making the off-diagonal real, then implicit-shift QL on the
// real symmetric tridiagonal (eigenvalues only).
void tridiagonalize(CMatrix a, std::vector<double>& d, std::vector<double>& e) {
    int n = a.n;
    d.assign(static_cast<size_t>(n), 0.0);
    e.assign(static_cast<size_t>(n), 0.0);
    std::vector<cplx> off(static_cast<size_t>(n), cplx(0, 0));
    for (int k = 0; k < n - 2; ++k) {
        // Householder vector for column k below the diagonal
        double xnorm2 = 0;
        for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(a.at(i, k));
        cplx x0 = a.at(k + 1, k);
        if (xnorm2 < 1e-280) {
            off[static_cast<size_t>(k)] = x0;
            continue;
        }
        double xnorm = std::sqrt(xnorm2);
        cplx phase = (std::abs(x0) > 0) ? x0 / std::abs(x0) : cplx(1, 0);
        cplx alpha = -phase * xnorm;
        std::vector<cplx> v(static_cast<size_t>(n), cplx(0, 0));
        for (int i = k + 1; i < n; ++i) v[static_cast<size_t>(i)] = a.at(i, k);
        v[static_cast<size_t>(k + 1)] -= alpha;
        double vnorm2 = 0;
        for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[static_cast<size_t>(i)]);
        if (vnorm2 < 1e-280) {
            off[static_cast<size_t>(k)] = alpha;
            continue;
        }
        // apply H = I - 2 v v* / |v|^2 on both sides: a <- H a H
        std::vector<cplx> w(static_cast<size_t>(n), cplx(0, 0));
        for (int i = k + 1; i < n; ++i) {
            cplx s(0, 0);
            for (int jj = k + 1; jj < n; ++jj)
                s += a.at(i, jj) * v[static_cast<size_t>(jj)];
            w[static_cast<size_t>(i)] = 2.0 * s / vnorm2;
        }
        cplx kfac(0, 0);
        for (int i = k + 1; i < n; ++i)
            kfac += std::conj(v[static_cast<size_t>(i)]) * w[static_cast<size_t>(i)];
        kfac /= vnorm2;
        for (int i = k + 1; i < n; ++i) {
            cplx wi = w[static_cast<size_t>(i)] - kfac * v[static_cast<size_t>(i)];
            for (int jj = k + 1; jj < n; ++jj)
                a.at(i, jj) -= wi * std::conj(v[static_cast<size_t>(jj)]) +
                               v[static_cast<size_t>(i)] * std::conj(w[static_cast<size_t>(jj)] -
                                                                     kfac * v[static_cast<size_t>(jj)]);
        }
        off[static_cast<size_t>(k)] = alpha;
        a.at(k + 1, k) = alpha;
    }
    if (n >= 2) off[static_cast<size_t>(n - 2)] = a.at(n - 1, n - 2);
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = a.at(i, i).real();
    // phase out the complex off-diagonals: e[i] couples d[i] and d[i+1]
    for (int i = 0; i + 1 < n; ++i) e[static_cast<size_t>(i)] = std::abs(off[static_cast<size_t>(i)]);
}

// implicit QL with Wilkinson shifts; sub[i] couples d[i] and d[i+1]
void ql_implicit(std::vector<double>& d, std::vector<double>& sub) {
    int n = static_cast<int>(d.size());
    if (n <= 1) return;
    sub.resize(static_cast<size_t>(n), 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[static_cast<size_t>(m)]) +
                            std::abs(d[static_cast<size_t>(m + 1)]);
                if (std::abs(sub[static_cast<size_t>(m)]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter > 80) throw AccuracyError("hermitian_eigenvalues: QL failed to converge");
                double g = (d[static_cast<size_t>(l + 1)] - d[static_cast<size_t>(l)]) /
                           (2.0 * sub[static_cast<size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
                    sub[static_cast<size_t>(l)] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * sub[static_cast<size_t>(i)];
                    double b = c * sub[static_cast<size_t>(i)];
                    r = std::hypot(f, g);
                    sub[static_cast<size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<size_t>(i + 1)] -= p;
                        sub[static_cast<size_t>(m)] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<size_t>(i + 1)] - p;
                    r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<size_t>(i + 1)] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[static_cast<size_t>(l)] -= p;
                sub[static_cast<size_t>(l)] = g;
                sub[static_cast<size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
    std::vector<double> d, e;
    tridiagonalize(m, d, e);
    ql_implicit(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> usp_eigenphases(const CMatrix& u, double pair_tol) {
    int n = u.n;
    if (n % 2) throw std::invalid_argument("usp_eigenphases: odd dimension");
    CMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h.at(i, j) = 0.5 * (u.at(i, j) + std::conj(u.at(j, i)));
    std::vector<double> cosv = hermitian_eigenvalues(h);  // ascending, each twice
    int g = n / 2;
    std::vector<double> phases(static_cast<size_t>(g), 0.0);
    double worst = 0;
    for (int k = 0; k < g; ++k) {
        double c1 = cosv[static_cast<size_t>(2 * k)], c2 = cosv[static_cast<size_t>(2 * k + 1)];
        double cm = std::clamp(0.5 * (c1 + c2), -1.0, 1.0);
        double th = std::acos(cm);
        // mismatch measured in phase units
        double dc = std::abs(c1 - c2);
        double denom = std::max(std::sqrt(1.0 - cm * cm), 1e-7);
        worst = std::max(worst, dc / denom);
        phases[static_cast<size_t>(g - 1 - k)] = th;  // acos reverses order
    }
    if (worst > pair_tol)
        throw AccuracyError("usp_eigenphases: pairing mismatch " + std::to_string(worst));
    std::sort(phases.begin(), phases.end());
    return phases;
}

AvgResult nlevel_rmt_empirical(const std::vector<TestFn>& fns, int g, int64_t n_samples,
                               uint64_t seed, int n, unsigned threads) {
    if (n < 1 || static_cast<int>(fns.size()) != n)
        throw std::invalid_argument("nlevel_rmt_empirical: need one test function per level");
    struct Partial {
        double sum = 0, sumsq = 0;
        int64_t count = 0;
    };
    auto partials = run_chunks<Partial>(
        n_samples, 64, threads, [&](int64_t, int64_t begin, int64_t end) {
            Partial p;
            KahanSum s, s2;
            for (int64_t i = begin; i < end; ++i) {
                CMatrix u = haar_usp(g, derive_seed(seed, static_cast<uint64_t>(i)));
                std::vector<double> phases = usp_eigenphases(u);
                double v;
                if (n == 1) {
                    // Fourier series of the periodized test function
                    int rmax = static_cast<int>(std::ceil(2.0 * g * fns[0].support())) + 1;
                    std::vector<double> tau = ensemble::tau_from_phases(phases, rmax);
                    KahanSum acc;
                    for (int r = 1; r <= rmax; ++r)
                        acc.add(fns[0].fhat(static_cast<double>(r) / (2.0 * g)) *
                                tau[static_cast<size_t>(r - 1)]);
                    v = fns[0].fhat(0.0) + acc.value() / g;
                } else {
                    v = ensemble::nlevel_direct(phases, fns, g, n);
                }
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
    AvgResult out;
    out.mean = total.value() / static_cast<double>(count);
    double var = (totalsq.value() / static_cast<double>(count) - out.mean * out.mean) *
                 static_cast<double>(count) / static_cast<double>(std::max<int64_t>(count - 1, 1));
    out.stderr_est = std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    out.count = count;
    return out;
}

namespace {
double sinc_pi(double t) {
    double z = M_PI * t;
    if (std::abs(z) < 1e-4) {
        double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}
}  // namespace

double kernel_K(double x, double y) { return sinc_pi(x - y) - sinc_pi(x + y); }

double weyl_trace_moment(int g, int power, int gl_points) {
    if (g < 1 || g > 3) throw std::invalid_argument("weyl_trace_moment: g <= 3");
    // Gauss-Legendre nodes on [0, pi]
    std::vector<double> x(static_cast<size_t>(gl_points)), w(static_cast<size_t>(gl_points));
    for (int i = 0; i < gl_points; ++i) {
        // Newton on Legendre P_n
        double t = std::cos(M_PI * (i + 0.75) / (gl_points + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= gl_points; ++k) {
                double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = gl_points * (t * p1 - p0) / (t * t - 1.0);
            double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= gl_points; ++k) {
            double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = gl_points * (t * p1 - p0) / (t * t - 1.0);
        x[static_cast<size_t>(i)] = M_PI * 0.5 * (1.0 - t);
        w[static_cast<size_t>(i)] = M_PI / ((1.0 - t * t) * dp * dp);
    }
    std::vector<int> idx(static_cast<size_t>(g), 0);
    double z = 0.0, moment = 0.0;
    for (;;) {
        double dens = 1.0, trace = 0.0, wt = 1.0;
        std::vector<double> th(static_cast<size_t>(g));
        for (int j = 0; j < g; ++j) {
            th[static_cast<size_t>(j)] = x[static_cast<size_t>(idx[static_cast<size_t>(j)])];
            wt *= w[static_cast<size_t>(idx[static_cast<size_t>(j)])];
            double s = std::sin(th[static_cast<size_t>(j)]);
            dens *= s * s;
            trace += 2.0 * std::cos(power * th[static_cast<size_t>(j)]);
        }
        for (int j = 0; j < g; ++j)
            for (int k = j + 1; k < g; ++k) {
                double diff = std::cos(th[static_cast<size_t>(j)]) - std::cos(th[static_cast<size_t>(k)]);
                dens *= diff * diff;
            }
        z += wt * dens;
        moment += wt * dens * trace;
        int j = g - 1;
        while (j >= 0 && ++idx[static_cast<size_t>(j)] == gl_points) {
            idx[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return moment / z;
}

double kernel_integral_1_xspace(const TestFn& fn) {
    // integrand f(x) (1 - sinc(2 pi x)), decays like f; integrate to a radius
    // where the f tail is below 1e-6
    double T = std::max(400.0, 80.0 / fn.support());
    auto integrand = [&](double x) { return fn.f(x) * (1.0 - sinc_pi(2.0 * x)); };
    double err = 0;
    double v = 2.0 * testfn::adaptive_gl(integrand, 0.0, T, 1e-9, &err);
    return v;
}

QuadResult kernel_integral(const std::vector<TestFn>& fns, int n, const KernelSpec& spec) {
    if (n < 1 || static_cast<int>(fns.size()) != n)
        throw std::invalid_argument("kernel_integral: need one test function per level");
    QuadResult r;
    if (n == 1) {
        // Fourier side: fhat(0) - (1/2) int_{-1}^{1} fhat(u) du, an exact
        // consequence of W1(x) = 1 - sinc(2 pi x).
        double err = 0;
        double inner = testfn::adaptive_gl([&](double u) { return fns[0].fhat(u); }, 0.0,
                                           std::min(1.0, fns[0].support()), 1e-12, &err);
        r.value = fns[0].fhat(0.0) - inner;  // even: int_{-1}^1 = 2 int_0^1
        r.err = 2 * err + 1e-12;
        r.ok = true;
        return r;
    }
    if (n == 2) {
        double X = spec.x_max;
        int panels = static_cast<int>(std::ceil(2.0 * X * spec.panels_per_unit));
        // 7-point Gauss-Legendre per panel per axis
        static const double xs[7] = {-0.9491079123427585, -0.7415311855993945,
                                     -0.4058451513773972, 0.0,
                                     0.4058451513773972,  0.7415311855993945,
                                     0.9491079123427585};
        static const double ws[7] = {0.1294849661688697, 0.2797053914892766,
                                     0.3818300505051189, 0.4179591836734694,
                                     0.3818300505051189, 0.2797053914892766,
                                     0.1294849661688697};
        int npts = panels * 7;
        std::vector<double> nodes(static_cast<size_t>(npts)), wts(static_cast<size_t>(npts));
        double hpanel = 2.0 * X / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = -X + p * hpanel;
            for (int i = 0; i < 7; ++i) {
                nodes[static_cast<size_t>(p * 7 + i)] = lo + 0.5 * hpanel * (1.0 + xs[i]);
                wts[static_cast<size_t>(p * 7 + i)] = 0.5 * hpanel * ws[i];
            }
        }
        std::vector<double> f1(static_cast<size_t>(npts)), f2(static_cast<size_t>(npts)),
            w1(static_cast<size_t>(npts));
        for (int i = 0; i < npts; ++i) {
            f1[static_cast<size_t>(i)] = fns[0].f(nodes[static_cast<size_t>(i)]);
            f2[static_cast<size_t>(i)] = fns[1].f(nodes[static_cast<size_t>(i)]);
            w1[static_cast<size_t>(i)] = kernel_K(nodes[static_cast<size_t>(i)], nodes[static_cast<size_t>(i)]);
        }
        KahanSum acc;
        for (int i = 0; i < npts; ++i) {
            double xi = nodes[static_cast<size_t>(i)];
            double wfi = wts[static_cast<size_t>(i)] * f1[static_cast<size_t>(i)];
            if (wfi == 0.0) continue;
            double row = 0.0;
            for (int j = 0; j < npts; ++j) {
                double k = kernel_K(xi, nodes[static_cast<size_t>(j)]);
                row += wts[static_cast<size_t>(j)] * f2[static_cast<size_t>(j)] *
                       (w1[static_cast<size_t>(i)] * w1[static_cast<size_t>(j)] - k * k);
            }
            acc.add(wfi * row);
        }
        r.value = acc.value();
        // truncation tail: |f| <= c/x^2 envelope, W-factors bounded by 2.25
        double env[2], mass[2];
        for (int i = 0; i < 2; ++i) {
            double c = 0;
            for (const auto& a : fns[static_cast<size_t>(i)].atoms())
                c += std::abs(a.amp) *
                     (a.fam == testfn::Family::triangle ? 1.0 / (M_PI * M_PI * a.s)
                                                        : 4.0 / std::pow(M_PI, 4) / (a.s * a.s));
            env[i] = c;
            mass[i] = std::abs(fns[static_cast<size_t>(i)].fhat(0.0)) + 2.0 * c;
        }
        double tail = 2.25 * 2.0 * (env[0] / X * mass[1] + env[1] / X * mass[0]);
        r.err = 1e-6 + tail;
        r.ok = r.err <= 5e-4;
        return r;
    }
    if (n == 3) {
        // quasi-random with the tangent map x = L u / (1 - u^2) per axis
        static const int primes[3] = {2, 3, 5};
        Rng rng(spec.qmc_seed);
        const uint64_t n_pts = uint64_t{1} << spec.qmc_log2_points;
        std::vector<double> means;
        double L[3];
        for (int i = 0; i < 3; ++i) L[i] = 2.0 / fns[static_cast<size_t>(i)].support();
        auto halton = [](uint64_t index, int base) {
            double f = 1.0, rr = 0.0;
            while (index) {
                f /= base;
                rr += f * static_cast<double>(index % static_cast<uint64_t>(base));
                index /= static_cast<uint64_t>(base);
            }
            return rr;
        };
        for (int sh = 0; sh < spec.qmc_shifts; ++sh) {
            double shift[3] = {rng.next_double(), rng.next_double(), rng.next_double()};
            KahanSum acc;
            for (uint64_t p = 0; p < n_pts; ++p) {
                double x[3], jac = 1.0, fprod = 1.0;
                for (int i = 0; i < 3; ++i) {
                    double u = halton(p + 1, primes[i]) + shift[i];
                    u -= std::floor(u);
                    u = 2.0 * u - 1.0;                      // (-1, 1)
                    double den = 1.0 - u * u;
                    x[i] = L[i] * u / den;
                    jac *= 2.0 * L[i] * (1.0 + u * u) / (den * den);
                    fprod *= fns[static_cast<size_t>(i)].f(x[i]);
                }
                double k01 = kernel_K(x[0], x[1]), k02 = kernel_K(x[0], x[2]),
                       k12 = kernel_K(x[1], x[2]);
                double k00 = kernel_K(x[0], x[0]), k11 = kernel_K(x[1], x[1]),
                       k22 = kernel_K(x[2], x[2]);
                double detk = k00 * (k11 * k22 - k12 * k12) - k01 * (k01 * k22 - k12 * k02) +
                              k02 * (k01 * k12 - k11 * k02);
                acc.add(fprod * detk * jac);
            }
            means.push_back(acc.value() / static_cast<double>(n_pts));
        }
        double mean = 0;
        for (double m : means) mean += m;
        mean /= spec.qmc_shifts;
        double var = 0;
        for (double m : means) var += (m - mean) * (m - mean);
        var /= (spec.qmc_shifts - 1);
        r.value = mean;
        r.stderr_est = std::sqrt(var / spec.qmc_shifts);
        r.err = 3.0 * r.stderr_est;
        r.ok = true;
        return r;
    }
    throw std::invalid_argument("kernel_integral: n > 3 not supported deterministically");
}

}  // namespace hyperell::rmt
