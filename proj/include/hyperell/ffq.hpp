#pragma once

// Exact arithmetic in F_q[x] for odd prime q: ring operations, squarefreeness,
// the polynomial Mobius function, prime enumeration and the quadratic/Jacobi
// residue symbol. Everything here is integer-exact; no floating point.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hyperell::ffq {

/// An odd prime field order q with precomputed residue/inverse tables.
class FieldOrder {
  public:
    explicit FieldOrder(int64_t q);

    int64_t q() const { return t_->q; }
    /// Quadratic-residue character of F_q^*: +1 residue, -1 non-residue, 0 at 0.
    int legendre(int64_t a) const { return t_->qr[static_cast<size_t>(a)]; }
    int64_t inv(int64_t a) const { return t_->inv[static_cast<size_t>(a)]; }

    friend bool operator==(const FieldOrder& a, const FieldOrder& b) {
        return a.q() == b.q();
    }
    friend bool operator!=(const FieldOrder& a, const FieldOrder& b) { return !(a == b); }

  private:
    struct Tables {
        int64_t q;
        std::vector<int8_t> qr;
        std::vector<int64_t> inv;
    };
    std::shared_ptr<const Tables> t_;
};

/// Polynomial over F_q, coefficients low-to-high, zero = empty coefficient list.
class Poly {
  public:
    Poly() = default;
    Poly(FieldOrder f, std::vector<int64_t> coeffs);
    static Poly zero(FieldOrder f) { return Poly(std::move(f), {}); }
    static Poly constant(FieldOrder f, int64_t c);
    static Poly x(FieldOrder f) { return Poly(std::move(f), {0, 1}); }

    const FieldOrder& field() const { return field_; }
    int64_t q() const { return field_.q(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    int64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : 0;
    }
    int64_t lead() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<int64_t>& coeffs() const { return c_; }

    int64_t eval(int64_t x) const;
    std::string to_string() const;  // canonical rendering, e.g. "x^3+2x+1"

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.q() == b.q() && a.c_ == b.c_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b);  // lexicographic, by degree first

  private:
    FieldOrder field_{3};
    std::vector<int64_t> c_;
    void trim();
    friend Poly add(const Poly&, const Poly&);
    friend Poly sub(const Poly&, const Poly&);
    friend Poly mul(const Poly&, const Poly&);
    friend void divmod(const Poly&, const Poly&, Poly&, Poly&);
};

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly mul_scalar(const Poly& a, int64_t s);
/// quot/rem with deg rem < deg b; throws on zero divisor or field mismatch.
void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem);
Poly mod(const Poly& a, const Poly& b);
/// Monic gcd.
Poly gcd(Poly a, Poly b);
Poly derivative(const Poly& a);
Poly make_monic(const Poly& a);
Poly pow_mod(const Poly& base, int64_t e, const Poly& modulus);
/// x^(q^k) mod modulus, the k-fold Frobenius image of x.
Poly frobenius_power(const Poly& x_img, const Poly& modulus);

/// Parses the canonical rendering ("x^3+2x+1"); throws std::invalid_argument
/// with a position tag on malformed input.
Poly parse_poly(const FieldOrder& f, const std::string& text);

/// Monic polynomial with checked invariants (leading coefficient exactly 1).
class MonicPoly {
  public:
    MonicPoly(FieldOrder f, std::vector<int64_t> coeffs) : p_(std::move(f), std::move(coeffs)) {
        check();
    }
    explicit MonicPoly(Poly p) : p_(std::move(p)) { check(); }

    const Poly& poly() const { return p_; }
    operator const Poly&() const { return p_; }  // NOLINT
    const FieldOrder& field() const { return p_.field(); }
    int64_t q() const { return p_.q(); }
    int degree() const { return p_.degree(); }
    int64_t coeff(int i) const { return p_.coeff(i); }
    std::string to_string() const { return p_.to_string(); }
    friend bool operator==(const MonicPoly& a, const MonicPoly& b) { return a.p_ == b.p_; }
    friend bool operator<(const MonicPoly& a, const MonicPoly& b) { return a.p_ < b.p_; }

  private:
    Poly p_;
    void check();
};

/// true iff gcd(h, h') = 1.
bool is_squarefree(const Poly& h);

/// Polynomial Mobius function: 0 if not squarefree, else (-1)^(#prime factors).
int mobius_mu(const MonicPoly& a);

bool is_irreducible(const Poly& p);

/// Monic polynomial with verified irreducibility.
class PrimePoly {
  public:
    explicit PrimePoly(MonicPoly p) : p_(std::move(p)) {
        if (!is_irreducible(p_.poly()))
            throw std::invalid_argument("PrimePoly: not irreducible: " + p_.to_string());
    }
    const MonicPoly& monic() const { return p_; }
    operator const Poly&() const { return p_.poly(); }  // NOLINT
    int degree() const { return p_.degree(); }

  private:
    MonicPoly p_;
};

/// Complete lexicographically sorted list of monic irreducibles of degree r.
/// Cached per (q, r); the list form is budgeted by q^r.
const std::vector<MonicPoly>& primes_of_degree(int r, const FieldOrder& f);

/// pi(r) by the necklace formula (1/r) sum_{d|r} mu(d) q^{r/d}; no budget.
int64_t prime_count(int r, const FieldOrder& f);

/// Jacobi symbol (B/A) for monic A of positive degree, by reciprocity descent.
int jacobi(const Poly& B, const Poly& A);

/// Euler-criterion form of the residue symbol mod an irreducible P (test oracle).
int jacobi_euler(const Poly& B, const Poly& P);

/// If d = e^2 for monic e, returns true and fills sqrt_out.
bool is_perfect_square(const Poly& d, Poly* sqrt_out = nullptr);

/// Visits all monic polynomials of the given degree in lexicographic order.
void enumerate_monic(const FieldOrder& f, int degree, const std::function<void(const Poly&)>& fn);

}  // namespace hyperell::ffq
