#include "hyperell/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperell/util.hpp"

namespace hyperell::testfn {

namespace {

double sinc(double z) {
    if (std::abs(z) < 1e-4) {
        double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

double atom_f(const Atom& a, double x) {
    switch (a.fam) {
        case Family::triangle: {
            double t = sinc(M_PI * a.s * x);
            return a.amp * a.s * t * t;
        }
        case Family::sinc4: {
            double t = sinc(M_PI * a.s * x / 2.0);
            double t2 = t * t;
            return a.amp * (a.s * a.s / 4.0) * t2 * t2;
        }
    }
    return 0.0;
}

double atom_fhat(const Atom& a, double u) {
    double au = std::abs(u);
    switch (a.fam) {
        case Family::triangle:
            return au >= a.s ? 0.0 : a.amp * (1.0 - au / a.s);
        case Family::sinc4: {
            // self-convolution of the half-width triangle: the scaled cubic
            // B-spline  a*(2/3 - w^2 + w^3/2) on w<=1,  a*(2-w)^3/6 on 1<=w<=2,
            // with a = s/2 and w = |u|/a.
            double half = a.s / 2.0;
            double w = au / half;
            if (w >= 2.0) return 0.0;
            double core = (w <= 1.0) ? (2.0 / 3.0 - w * w + w * w * w / 2.0)
                                     : ((2.0 - w) * (2.0 - w) * (2.0 - w) / 6.0);
            return a.amp * half * core;
        }
    }
    return 0.0;
}

}  // namespace

TestFn::TestFn(Family fam, double s, double amp) {
    if (!(s > 0)) throw std::invalid_argument("TestFn: support must be positive");
    atoms_.push_back(Atom{fam, s, amp});
}

TestFn::TestFn(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("TestFn: empty atom list");
    for (const auto& a : atoms_)
        if (!(a.s > 0)) throw std::invalid_argument("TestFn: support must be positive");
}

double TestFn::support() const {
    double s = 0;
    for (const auto& a : atoms_) s = std::max(s, a.s);
    return s;
}

double TestFn::f(double x) const {
    double v = 0;
    for (const auto& a : atoms_) v += atom_f(a, x);
    return v;
}

double TestFn::fhat(double u) const {
    double v = 0;
    for (const auto& a : atoms_) v += atom_fhat(a, u);
    return v;
}

TestFn TestFn::scaled(double c) const {
    std::vector<Atom> at = atoms_;
    for (auto& a : at) a.amp *= c;
    return TestFn(std::move(at));
}

TestFn operator+(const TestFn& a, const TestFn& b) {
    std::vector<Atom> at = a.atoms_;
    at.insert(at.end(), b.atoms_.begin(), b.atoms_.end());
    return TestFn(std::move(at));
}

TestFn TestFn::parse(const std::string& spec) {
    auto fail = [&](size_t pos, const std::string& msg) {
        throw std::invalid_argument("test-function spec \"" + spec + "\": " + msg +
                                    " at position " + std::to_string(pos));
    };
    size_t colon = spec.find(':');
    if (colon == std::string::npos) fail(spec.size(), "expected ':' after family name");
    std::string fam = spec.substr(0, colon);
    Family f;
    if (fam == "triangle")
        f = Family::triangle;
    else if (fam == "sinc4")
        f = Family::sinc4;
    else
        fail(0, "unknown family \"" + fam + "\" (expected triangle or sinc4)");
    if (spec.compare(colon + 1, 2, "s=") != 0) fail(colon + 1, "expected \"s=\"");
    size_t vpos = colon + 3;
    if (vpos >= spec.size()) fail(vpos, "missing support value");
    size_t used = 0;
    double s = 0;
    try {
        s = std::stod(spec.substr(vpos), &used);
    } catch (const std::exception&) {
        fail(vpos, "malformed support value");
    }
    if (vpos + used != spec.size()) fail(vpos + used, "trailing characters");
    if (!(s > 0)) fail(vpos, "support must be positive");
    return TestFn(f, s);
}

std::string TestFn::spec() const {
    if (atoms_.size() != 1 || atoms_[0].amp != 1.0) {
        std::string s = "sum[";
        for (const auto& a : atoms_)
            s += (a.fam == Family::triangle ? "triangle" : "sinc4") + std::string(":s=") +
                 std::to_string(a.s) + ":amp=" + std::to_string(a.amp) + ";";
        return s + "]";
    }
    const Atom& a = atoms_[0];
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:s=%g", a.fam == Family::triangle ? "triangle" : "sinc4",
                  a.s);
    return buf;
}

double sum_support(const std::vector<TestFn>& fns) {
    double s = 0;
    for (const auto& f : fns) s += f.support();
    return s;
}

double TransformGrid::value(double x) const {
    if (exact_fn) return std::abs(x) >= support ? 0.0 : exact_fn(x);
    double t = x / h;
    if (std::abs(t) >= n) return 0.0;
    int i0 = static_cast<int>(std::floor(t));
    double frac = t - i0;
    // Catmull-Rom through the four surrounding nodes
    auto node = [&](int i) { return (i < -n || i > n) ? 0.0 : at(i); };
    double p0 = node(i0 - 1), p1 = node(i0), p2 = node(i0 + 1), p3 = node(i0 + 2);
    double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double c = -0.5 * p0 + 0.5 * p2;
    return ((a * frac + b) * frac + c) * frac + p1;
}

double TransformGrid::integral(double a, double b) const {
    if (a >= b) return 0.0;
    if (exact_fn) {
        double lo = std::max(a, -support), hi = std::min(b, support);
        if (lo >= hi) return 0.0;
        return adaptive_gl(exact_fn, lo, hi, 1e-12);
    }
    auto cum_at = [&](double x) -> double {
        if (x <= -n * h) return 0.0;
        if (x >= n * h) return cum.back();
        double t = x / h;
        int i0 = static_cast<int>(std::floor(t));
        double frac = t - i0;
        auto node = [&](int i) { return (i < -n || i > n) ? 0.0 : at(i); };
        double p0 = node(i0 - 1), p1 = node(i0), p2 = node(i0 + 1), p3 = node(i0 + 2);
        double ca = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        double cb = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        double cc = -0.5 * p0 + 0.5 * p2;
        // integral of the Catmull-Rom segment from 0 to frac
        double seg = ((ca / 4.0 * frac + cb / 3.0) * frac + cc / 2.0) * frac * frac + p1 * frac;
        return cum[static_cast<size_t>(i0 + n)] + seg * h;
    };
    return cum_at(b) - cum_at(a);
}

double TransformGrid::total_mass() const {
    double m = 0;
    for (double x : v) m += std::abs(x);
    return m * h;
}

namespace {

void build_cumulative(TransformGrid& g) {
    g.cum.assign(g.v.size(), 0.0);
    for (int i = -g.n; i < g.n; ++i) {
        auto node = [&](int k) { return (k < -g.n || k > g.n) ? 0.0 : g.at(k); };
        double p0 = node(i - 1), p1 = node(i), p2 = node(i + 1), p3 = node(i + 2);
        // exact integral of the Catmull-Rom cubic over the cell
        double cell = (-p0 + 13.0 * p1 + 13.0 * p2 - p3) / 24.0 * g.h;
        g.cum[static_cast<size_t>(i + 1 + g.n)] = g.cum[static_cast<size_t>(i + g.n)] + cell;
    }
}

std::vector<double> convolve_scaled(const std::vector<double>& a, const std::vector<double>& b,
                                    double h) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        double ai = a[i] * h;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
    }
    return out;
}

// convolution chain at fixed spacing; returns value array over [-n_out, n_out]
std::vector<double> chain_at(const std::vector<TestFn>& block, double h, int& n_out) {
    std::vector<double> acc;
    int n_acc = 0;
    for (size_t k = 0; k < block.size(); ++k) {
        int nk = static_cast<int>(std::ceil(block[k].support() / h)) + 2;
        std::vector<double> cur(static_cast<size_t>(2 * nk) + 1);
        for (int i = -nk; i <= nk; ++i)
            cur[static_cast<size_t>(i + nk)] = block[k].fhat(i * h);
        if (k == 0) {
            acc = std::move(cur);
            n_acc = nk;
        } else {
            acc = convolve_scaled(acc, cur, h);
            n_acc += nk;
        }
    }
    n_out = n_acc;
    return acc;
}

}  // namespace

double default_grid_h(const std::vector<TestFn>& block) {
    double smin = block.at(0).support();
    for (const auto& f : block) smin = std::min(smin, f.support());
    return smin / 1024.0;
}

TransformGrid product_transform(const std::vector<TestFn>& block, double h) {
    if (block.empty()) throw std::invalid_argument("product_transform: empty block");
    double total_support = sum_support(block);
    // The statistics layers enforce the sum s_k < 2 range themselves; the
    // grid machinery only guards against runaway sizes.
    if (total_support > 4.0)
        throw std::invalid_argument("product_transform: support overflow (sum s_k = " +
                                    std::to_string(total_support) + ")");
    if (h <= 0) h = default_grid_h(block);

    TransformGrid g;
    g.support = total_support;
    if (block.size() == 1) {
        // exact copy of the closed form, sampled at the refined spacing
        g.h = h / 2.0;
        g.n = static_cast<int>(std::ceil(g.support / g.h)) + 2;
        g.v.resize(static_cast<size_t>(2 * g.n) + 1);
        for (int i = -g.n; i <= g.n; ++i)
            g.v[static_cast<size_t>(i + g.n)] = block[0].fhat(i * g.h);
        g.err = 0.0;
        build_cumulative(g);
        TestFn fn = block[0];
        g.exact_fn = [fn](double x) { return fn.fhat(x); };
        return g;
    }
    int n_coarse = 0, n_fine = 0;
    std::vector<double> coarse = chain_at(block, h, n_coarse);
    std::vector<double> fine = chain_at(block, h / 2.0, n_fine);
    double err = 0.0;
    for (int i = -n_coarse; i <= n_coarse; ++i) {
        int j = 2 * i;
        double vf = (std::abs(j) <= n_fine) ? fine[static_cast<size_t>(j + n_fine)] : 0.0;
        err = std::max(err, std::abs(vf - coarse[static_cast<size_t>(i + n_coarse)]));
    }
    g.h = h / 2.0;
    g.n = n_fine;
    g.v = std::move(fine);
    g.err = err;
    build_cumulative(g);
    return g;
}

QuadResult pair_integral(const TransformGrid& a, const TransformGrid& b) {
    if (std::abs(a.h - b.h) > 1e-15 * std::max(a.h, b.h))
        throw std::invalid_argument("pair_integral: incompatible grids");
    int n = std::min(a.n, b.n);
    auto weighted_trapz = [&](int step) {
        double s = 0.0;
        for (int i = -n + (n % step); i <= n; i += step) {
            double w = (std::abs(i) >= n) ? 0.5 : 1.0;
            s += w * a.at(i) * b.at(i) * std::abs(i * a.h);
        }
        return s * a.h * step;
    };
    // three-level Richardson: the returned value is the h-extrapolation, the
    // error estimate the spread between the two extrapolation levels
    double i1 = weighted_trapz(1), i2 = weighted_trapz(2), i4 = weighted_trapz(4);
    double e1 = i1 + (i1 - i2) / 3.0;
    double e2 = i2 + (i2 - i4) / 3.0;
    QuadResult r;
    r.value = e1;
    r.err = std::abs(e1 - e2) + (a.err * b.total_mass() + b.err * a.total_mass());
    r.ok = r.err <= 1e-8;
    return r;
}

double adaptive_gl(const std::function<double(double)>& f, double a, double b, double tol,
                   double* err_out, int min_depth) {
    // 8-point Gauss-Legendre nodes on [-1, 1]
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                 0.1012285362903763};
    auto gl8 = [&](double lo, double hi) {
        double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo), s = 0.0;
        for (int i = 0; i < 4; ++i) s += ws[i] * (f(c - r * xs[i]) + f(c + r * xs[i]));
        return s * r;
    };
    double err_acc = 0.0;
    // the minimum depth guards against spurious agreement on intervals where
    // the mass is concentrated in a small fraction of the range
    std::function<double(double, double, double, double, int)> rec =
        [&](double lo, double hi, double whole, double tl, int depth) -> double {
        double mid = 0.5 * (lo + hi);
        double left = gl8(lo, mid), right = gl8(mid, hi);
        double diff = std::abs(left + right - whole);
        if ((diff < tl && depth >= min_depth) || depth >= 28) {
            err_acc += diff;
            return left + right;
        }
        return rec(lo, mid, left, tl * 0.5, depth + 1) + rec(mid, hi, right, tl * 0.5, depth + 1);
    };
    if (a >= b) {
        if (err_out) *err_out = 0;
        return 0.0;
    }
    double v = rec(a, b, gl8(a, b), tol, 0);
    if (err_out) *err_out = err_acc;
    return v;
}

namespace {

// deterministic Halton sequence for the quasi-random region path
double halton(uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index) {
        f /= base;
        r += f * static_cast<double>(index % static_cast<uint64_t>(base));
        index /= static_cast<uint64_t>(base);
    }
    return r;
}

}  // namespace

QuadResult region_integral(const std::vector<int>& I,
                           const std::vector<const TransformGrid*>& grids, uint64_t qmc_seed) {
    int d = static_cast<int>(grids.size());
    if (d < 1) throw std::invalid_argument("region_integral: need d >= 1");
    std::vector<bool> in_I(static_cast<size_t>(d), false);
    for (int idx : I) {
        if (idx < 0 || idx >= d) throw std::invalid_argument("region_integral: bad index in I");
        in_I[static_cast<size_t>(idx)] = true;
    }
    std::vector<int> comp;
    for (int i = 0; i < d; ++i)
        if (!in_I[static_cast<size_t>(i)]) comp.push_back(i);
    QuadResult r;
    if (comp.empty()) return r;  // sum_I t <= -1 impossible on t >= 0

    // Quick support check: the region needs sum_{I^c} t >= 1 somewhere.
    double comp_support = 0.0;
    for (int i : comp) comp_support += grids[static_cast<size_t>(i)]->support;
    if (comp_support <= 1.0) return r;

    // innermost coordinate: the I^c coordinate with the largest support
    int inner = comp[0];
    for (int i : comp)
        if (grids[static_cast<size_t>(i)]->support > grids[static_cast<size_t>(inner)]->support)
            inner = i;
    std::vector<int> outer;
    for (int i = 0; i < d; ++i)
        if (i != inner) outer.push_back(i);

    double target = d <= 2 ? 1e-7 : (d <= 4 ? 1e-5 : 0.0);

    if (d <= 4) {
        std::vector<double> t(static_cast<size_t>(d), 0.0);
        double outer_err = 0.0;
        double tol_level = target / (4.0 * static_cast<double>(std::max<size_t>(1, outer.size())));
        // recursive clipped iterated quadrature, innermost integral exact from
        // the cumulative table
        std::function<double(size_t)> level = [&](size_t k) -> double {
            if (k == outer.size()) {
                double shift = 1.0;  // lower limit 1 + sum_I t - sum_{I^c \ inner} t
                for (int i = 0; i < d; ++i) {
                    if (i == inner) continue;
                    shift += in_I[static_cast<size_t>(i)] ? t[static_cast<size_t>(i)]
                                                          : -t[static_cast<size_t>(i)];
                }
                const TransformGrid& gi = *grids[static_cast<size_t>(inner)];
                double lo = std::max(0.0, shift);
                if (lo >= gi.support) return 0.0;
                return gi.integral(lo, gi.support);
            }
            int dim = outer[k];
            const TransformGrid& gd = *grids[static_cast<size_t>(dim)];
            double sub_err = 0.0;
            // short smooth range: a shallow initial subdivision is enough and
            // keeps the nested-dimension cost bounded
            double val = adaptive_gl(
                [&](double x) {
                    t[static_cast<size_t>(dim)] = x;
                    return gd.value(x) * level(k + 1);
                },
                0.0, gd.support, tol_level, &sub_err, 2);
            if (k == 0) outer_err = sub_err;
            return val;
        };
        r.value = level(0);
        // inner levels are bounded by their tolerance times the outer mass
        r.err = outer_err + tol_level * 2.0 * static_cast<double>(outer.size());
        for (int i = 0; i < d; ++i) r.err += grids[static_cast<size_t>(i)]->err;
        r.ok = r.err <= target;
        return r;
    }

    // quasi-random sampling with randomized shifts for d > 4
    static const int primes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
    const int n_shifts = 8;
    const uint64_t n_pts = 1 << 15;
    double vol = 1.0;
    for (int i = 0; i < d; ++i) vol *= grids[static_cast<size_t>(i)]->support;
    std::vector<double> means;
    Rng rng(qmc_seed);
    for (int sh = 0; sh < n_shifts; ++sh) {
        std::vector<double> shift(static_cast<size_t>(d));
        for (auto& s : shift) s = rng.next_double();
        KahanSum acc;
        for (uint64_t p = 0; p < n_pts; ++p) {
            double lhs = 0.0, rhs = 0.0, prod = 1.0;
            for (int i = 0; i < d; ++i) {
                double u = halton(p + 1, primes[i]) + shift[static_cast<size_t>(i)];
                u -= std::floor(u);
                double x = u * grids[static_cast<size_t>(i)]->support;
                prod *= grids[static_cast<size_t>(i)]->value(x);
                if (in_I[static_cast<size_t>(i)])
                    lhs += x;
                else
                    rhs += x;
            }
            if (lhs <= rhs - 1.0) acc.add(prod);
        }
        means.push_back(vol * acc.value() / static_cast<double>(n_pts));
    }
    double mean = 0;
    for (double m : means) mean += m;
    mean /= n_shifts;
    double var = 0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (n_shifts - 1);
    r.value = mean;
    r.stderr_est = std::sqrt(var / n_shifts);
    r.err = 3.0 * r.stderr_est;
    r.ok = true;
    return r;
}

QuadResult time_side_product_integral(const std::vector<TestFn>& block) {
    // integrand decays like x^(-2 sum) with oscillation scale ~ 1/min s; the
    // tail beyond T contributes below target once T^3 >= c / tol.
    double smin = block.at(0).support();
    for (const auto& f : block) smin = std::min(smin, f.support());
    double T = std::max(200.0, 40.0 / smin);
    auto prod = [&](double x) {
        double p = 1.0;
        for (const auto& f : block) p *= f.f(x);
        return p;
    };
    QuadResult r;
    double err = 0.0;
    double half = adaptive_gl(prod, 0.0, T, 1e-10, &err);
    // envelope |f| <= c / x^2 per factor (the sinc4 family decays faster)
    double tail_bound = 1.0;
    for (const auto& f : block) {
        double c = 0.0;
        for (const auto& a : f.atoms())
            c += std::abs(a.amp) * (a.fam == Family::triangle ? 1.0 / (M_PI * M_PI * a.s)
                                                              : 4.0 / std::pow(M_PI, 4) / (a.s * a.s));
        tail_bound *= c;
    }
    double m = static_cast<double>(block.size());
    double tail = tail_bound / (2.0 * m - 1.0) / std::pow(T, 2.0 * m - 1.0);
    r.value = 2.0 * half;  // even integrand
    r.err = 2.0 * err + tail;
    r.ok = true;
    return r;
}

}  // namespace hyperell::testfn
