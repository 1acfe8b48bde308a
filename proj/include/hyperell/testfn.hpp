#pragma once

// Test-function algebra: closed-form (f, fhat) pairs with compactly supported
// fhat, Fourier transforms of pointwise products via convolution grids, pair
// integrals, and clipped half-space region integrals.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hyperell::testfn {

enum class Family { triangle, sinc4 };

/// One closed-form pair scaled by an amplitude:
///   triangle: fhat(u) = max(0, 1-|u|/s),  f(x) = s sinc^2(pi s x)
///   sinc4:    fhat = self-convolution of the half-width triangle (piecewise
///             cubic, support (-s,s)),     f(x) = (s^2/4) sinc^4(pi s x / 2)
struct Atom {
    Family fam = Family::triangle;
    double s = 1.0;
    double amp = 1.0;
};

/// A finite linear combination of atoms. Parsed specs are single atoms; sums
/// exist so linearity of the statistics can be exercised directly.
class TestFn {
  public:
    TestFn() = default;
    TestFn(Family fam, double s, double amp = 1.0);
    explicit TestFn(std::vector<Atom> atoms);

    double support() const;  // max atom support; fhat vanishes outside (-s, s)
    double f(double x) const;
    double fhat(double u) const;
    const std::vector<Atom>& atoms() const { return atoms_; }

    TestFn scaled(double c) const;
    friend TestFn operator+(const TestFn& a, const TestFn& b);

    /// Parses "triangle:s=1.5" or "sinc4:s=0.9"; throws std::invalid_argument
    /// with position info on malformed input.
    static TestFn parse(const std::string& spec);
    /// Canonical spec string (single-atom functions only).
    std::string spec() const;

  private:
    std::vector<Atom> atoms_;
};

double sum_support(const std::vector<TestFn>& fns);

/// Uniformly sampled transform on [-S, S] with a Richardson error estimate.
/// Single-function grids keep their closed form, so evaluation and the inner
/// region integrals are exact for them.
struct TransformGrid {
    double h = 0.0;
    int n = 0;                // values at x = i h for i in [-n, n]
    std::vector<double> v;    // size 2n+1, index i+n
    std::vector<double> cum;  // cum[i+n] = integral of the grid function on [-S, x_i]
    double support = 0.0;
    double err = 0.0;
    std::function<double(double)> exact_fn;  // set for single-function blocks

    double at(int i) const { return v[static_cast<size_t>(i + n)]; }
    double value(double x) const;            // closed form or cubic interpolation
    double integral(double a, double b) const;  // closed-form quadrature or cumulative
    double total_mass() const;                  // integral of |values|
};

/// Default grid spacing min_k s_k / 1024; grids are stored once refined (h/2)
/// and the reported error is the coarse/fine Richardson estimate.
double default_grid_h(const std::vector<TestFn>& block);

/// Transform of prod_{k in block} f_k by iterated numerical convolution of
/// the fhat_k. Support is (-sum s_k, sum s_k); rejects sum s_k >= 2.
TransformGrid product_transform(const std::vector<TestFn>& block, double h = 0.0);

struct QuadResult {
    double value = 0.0;
    double err = 0.0;
    double stderr_est = 0.0;  // nonzero only for quasi-random evaluation
    bool ok = true;
};

/// integral of A(t) B(t) |t| dt (no factor 2); trapezoid + Richardson,
/// target error 1e-8.
QuadResult pair_integral(const TransformGrid& a, const TransformGrid& b);

/// integral over { t in R_{>=0}^d : sum_{i in I} t_i <= sum_{i in I^c} t_i - 1 }
/// of prod_i grids[i](t_i). Deterministic clipped iterated quadrature for
/// d <= 4 (targets 1e-7 for d <= 2, 1e-5 for d <= 4), quasi-random sampling
/// beyond, with the standard error reported.
QuadResult region_integral(const std::vector<int>& I,
                           const std::vector<const TransformGrid*>& grids,
                           uint64_t qmc_seed = 7);

/// Time-side integral of prod_{k in block} f_k over R with error estimate.
QuadResult time_side_product_integral(const std::vector<TestFn>& block);

/// Adaptive Gauss-Legendre on [a, b] (exposed for the closed-form integrals).
/// min_depth forces an initial 2^min_depth-panel subdivision; keep it high for
/// long intervals whose mass sits in a small fraction of the range.
double adaptive_gl(const std::function<double(double)>& f, double a, double b, double tol,
                   double* err_out = nullptr, int min_depth = 5);

}  // namespace hyperell::testfn
