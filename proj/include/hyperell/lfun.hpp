#pragma once

// L-polynomials of quadratic characters chi_D, reduction to the completed
// polynomial L*, scaled Frobenius traces via the explicit formula, and
// eigenphase extraction. All coefficient and trace arithmetic is in exact
// integers; floating point only enters through eigenphases().

#include <cstdint>
#include <vector>

#include "hyperell/ffq.hpp"

namespace hyperell::lfun {

/// Coefficients A_D(beta) of the L-polynomial of chi_D, beta = 0 .. deg D - 1.
struct LPolynomial {
    ffq::MonicPoly D;
    std::vector<int64_t> A;  // A[beta]
};

/// The reduced polynomial L* = L / (1-u)^lambda with its symmetry data:
/// lambda is the trivial-zero flag, 2*delta = deg D - 1 - lambda, and the
/// coefficients satisfy Astar[b] = q^(b-delta) * Astar[2 delta - b].
struct StarData {
    ffq::MonicPoly D;
    int lambda = 0;
    int delta = 0;
    std::vector<int64_t> Astar;  // size 2*delta + 1, Astar[0] = 1
    int64_t q() const { return D.q(); }
};

/// c_r = lambda + sum_{deg f = r} Lambda(f) chi_h(f) = -q^(r/2) tr Theta_h^r.
struct ScaledTraces {
    int64_t q = 0;
    int g = 0;
    int lambda = 0;
    std::vector<int64_t> c;  // c[r-1] for r = 1 .. r_max
    int r_max() const { return static_cast<int>(c.size()); }
    int64_t at(int r) const { return c.at(static_cast<size_t>(r - 1)); }
};

/// Eigenphases theta_j in [0,pi], ascending, with the unit-circle residual of
/// the normalized roots (Riemann Hypothesis check).
struct Eigenphases {
    std::vector<double> theta;
    double residual = 0.0;
};

/// chi_D(f) = (D/f); chi_D of a nonzero constant is 1.
int chi(const ffq::MonicPoly& D, const ffq::Poly& f);

/// A_D(beta) by direct summation of chi_D over all monic B of degree beta.
/// Budgeted by q^(deg D); rejects perfect squares.
LPolynomial l_coeffs(const ffq::MonicPoly& D);

/// A_D(beta) for beta <= up_to via the Euler product over primes of degree
/// <= up_to. Exact and equal to the direct sum; used as the fast path.
std::vector<int64_t> l_coeffs_euler(const ffq::MonicPoly& D, int up_to);

/// Reduce L to L*, checking the trivial zero and the exact functional
/// equation; throws IdentityError on violation.
StarData star_reduce(const LPolynomial& lp);

/// Fast star data: Euler product up to degree delta, top half by the
/// functional equation. Agrees with star_reduce(l_coeffs(D)).
StarData star_data_fast(const ffq::MonicPoly& D);

/// c_r by direct enumeration of prime powers of degree r (budgeted).
/// Requires h squarefree of odd degree 2g+1.
ScaledTraces scaled_traces(const ffq::MonicPoly& h, int r_max);

/// c_r from StarData via Newton's identities; exact integers.
ScaledTraces traces_from_star(const StarData& sd, int r_max);

/// Roots of L* normalized to the unit circle; throws AccuracyError when a
/// normalized root is farther than rh_tol from |z| = 1.
Eigenphases eigenphases(const StarData& sd, double rh_tol = 1e-8);

/// Frobenius traces tr Theta^r = -q^(-r/2) (c_r - lambda), r = 1..r_max.
std::vector<double> unitarized_traces(const ScaledTraces& st);

/// Text record "q,D,lambda,delta,A*[0..2delta]" for the CLI lpoly subcommand.
std::string star_record(const StarData& sd);

}  // namespace hyperell::lfun
