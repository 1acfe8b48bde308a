#pragma once

// The random-matrix side: Haar sampling of USp(2g), eigenphase statistics,
// the determinantal sine kernel K, and the n-level kernel integrals.

#include <complex>
#include <cstdint>
#include <vector>

#include "hyperell/ensemble.hpp"
#include "hyperell/testfn.hpp"

namespace hyperell::rmt {

/// Dense row-major complex matrix, just large enough for this module.
struct CMatrix {
    int n = 0;
    std::vector<std::complex<double>> a;
    CMatrix() = default;
    explicit CMatrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_) {}
    std::complex<double>& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const std::complex<double>& at(int i, int j) const {
        return a[static_cast<size_t>(i) * n + j];
    }
};

CMatrix matmul(const CMatrix& x, const CMatrix& y);
std::complex<double> det(CMatrix m);  // by LU with partial pivoting
std::complex<double> trace(const CMatrix& m);

/// Haar-distributed U in USp(2g), via quaternionic-Gaussian Gram-Schmidt with
/// real-positive normalization, embedded as 2x2 complex blocks. Satisfies
/// U U* = I and U^T J U = J for J = diag(((0,1),(-1,0)) x g).
CMatrix haar_usp(int g, uint64_t seed);

CMatrix standard_j(int g);
double residual_unitary(const CMatrix& u);
double residual_symplectic(const CMatrix& u);

/// Eigenvalues of a complex Hermitian matrix, ascending (tridiagonalization +
/// implicit QL, values only).
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// The g eigenphases in [0, pi], ascending, from the Hermitian part
/// (U + U*)/2; throws AccuracyError when the +- pairing mismatch exceeds tol.
std::vector<double> usp_eigenphases(const CMatrix& u, double pair_tol = 1e-8);

/// Monte-Carlo mean of the n-level density over Haar samples.
ensemble::AvgResult nlevel_rmt_empirical(const std::vector<testfn::TestFn>& fns, int g, int64_t n_samples,
                                         uint64_t seed, int n = 1, unsigned threads = 0);

/// K(x,y) = sinc(pi(x-y)) - sinc(pi(x+y)).
double kernel_K(double x, double y);

struct KernelSpec {
    double x_max = 60.0;    // truncation radius for the n=2 tensor quadrature
    int panels_per_unit = 4;
    int qmc_log2_points = 17;  // n=3 quasi-random points per shift
    int qmc_shifts = 8;
    uint64_t qmc_seed = 2024;
};

/// integral of f1...fn times det(K(x_i,x_j)) over R^n. n=1 is evaluated
/// Fourier-side as fhat(0) - (1/2) integral_{-1}^{1} fhat; n=2 by tensor
/// quadrature (target 5e-4); n=3 by quasi-random sampling (target 1e-2,
/// stderr reported).
testfn::QuadResult kernel_integral(const std::vector<testfn::TestFn>& fns, int n,
                                   const KernelSpec& spec = {});

/// x-space quadrature oracle for the n=1 integral (target 1e-4).
double kernel_integral_1_xspace(const testfn::TestFn& fn);

/// E[tr U^power] over USp(2g) by Gauss-Legendre quadrature of the joint
/// eigenphase density prod_{j<k}(cos t_j - cos t_k)^2 prod_j sin^2 t_j;
/// exact-density oracle for the sampler moments (g <= 3 is practical).
double weyl_trace_moment(int g, int power, int gl_points = 48);

}  // namespace hyperell::rmt
