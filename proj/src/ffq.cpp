#include "hyperell/ffq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "hyperell/util.hpp"

namespace hyperell::ffq {

namespace {

bool is_prime_int(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

void require_same_field(const Poly& a, const Poly& b) {
    if (a.q() != b.q())
        throw std::invalid_argument("mismatched field orders: q=" + std::to_string(a.q()) +
                                    " vs q=" + std::to_string(b.q()));
}

}  // namespace

FieldOrder::FieldOrder(int64_t q) {
    if (q < 3 || q > 997 || q % 2 == 0 || !is_prime_int(q))
        throw std::invalid_argument("FieldOrder: q must be an odd prime in [3,997], got " +
                                    std::to_string(q));
    auto t = std::make_shared<Tables>();
    t->q = q;
    t->qr.assign(static_cast<size_t>(q), -1);
    t->qr[0] = 0;
    for (int64_t a = 1; a < q; ++a) t->qr[static_cast<size_t>(a * a % q)] = 1;
    t->inv.assign(static_cast<size_t>(q), 0);
    for (int64_t a = 1; a < q; ++a) {
        // Fermat inverse
        int64_t r = 1, b = a, e = q - 2;
        while (e) {
            if (e & 1) r = r * b % q;
            b = b * b % q;
            e >>= 1;
        }
        t->inv[static_cast<size_t>(a)] = r;
    }
    t_ = std::move(t);
}

Poly::Poly(FieldOrder f, std::vector<int64_t> coeffs) : field_(std::move(f)), c_(std::move(coeffs)) {
    int64_t q = field_.q();
    for (auto& x : c_) {
        x %= q;
        if (x < 0) x += q;
    }
    trim();
}

Poly Poly::constant(FieldOrder f, int64_t c) { return Poly(std::move(f), {c}); }

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int64_t Poly::eval(int64_t x) const {
    int64_t q = field_.q(), v = 0;
    x %= q;
    if (x < 0) x += q;
    for (size_t i = c_.size(); i-- > 0;) v = (v * x + c_[i]) % q;
    return v;
}

bool operator<(const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i)
        if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
    return false;
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        int64_t c = coeff(i);
        if (c == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) s += std::to_string(c);
            s += (i == 1) ? "x" : "x^" + std::to_string(i);
        }
    }
    return s;
}

Poly add(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    int64_t q = a.q();
    std::vector<int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) c[i] = (a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i))) % q;
    return Poly(a.field(), std::move(c));
}

Poly sub(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    int64_t q = a.q();
    std::vector<int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (size_t i = 0; i < c.size(); ++i)
        c[i] = (a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i)) % q + q) % q;
    return Poly(a.field(), std::move(c));
}

Poly mul(const Poly& a, const Poly& b) {
    require_same_field(a, b);
    if (a.is_zero() || b.is_zero()) return Poly::zero(a.field());
    int64_t q = a.q();
    std::vector<int64_t> c(a.c_.size() + b.c_.size() - 1, 0);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] = (c[i + j] + a.c_[i] * b.c_[j]) % q;
    }
    return Poly(a.field(), std::move(c));
}

Poly mul_scalar(const Poly& a, int64_t s) {
    std::vector<int64_t> c = a.coeffs();
    int64_t q = a.q();
    s %= q;
    if (s < 0) s += q;
    for (auto& x : c) x = x * s % q;
    return Poly(a.field(), std::move(c));
}

void divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
    require_same_field(a, b);
    if (b.is_zero()) throw std::invalid_argument("division by zero polynomial");
    int64_t q = a.q();
    std::vector<int64_t> r = a.coeffs();
    int db = b.degree();
    int64_t lead_inv = a.field().inv(b.lead());
    std::vector<int64_t> qu;
    if (a.degree() >= db) qu.assign(static_cast<size_t>(a.degree() - db + 1), 0);
    for (int i = a.degree(); i >= db; --i) {
        int64_t cfac = r[static_cast<size_t>(i)] * lead_inv % q;
        if (cfac) {
            qu[static_cast<size_t>(i - db)] = cfac;
            for (int j = 0; j <= db; ++j) {
                auto& slot = r[static_cast<size_t>(i - db + j)];
                slot = (slot - cfac * b.coeff(j)) % q;
                if (slot < 0) slot += q;
            }
        }
    }
    r.resize(static_cast<size_t>(std::max(db, 0)));
    quot = Poly(a.field(), std::move(qu));
    rem = Poly(a.field(), std::move(r));
}

Poly mod(const Poly& a, const Poly& b) {
    Poly q, r;
    divmod(a, b, q, r);
    return r;
}

Poly make_monic(const Poly& a) {
    if (a.is_zero() || a.is_monic()) return a;
    return mul_scalar(a, a.field().inv(a.lead()));
}

Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

Poly derivative(const Poly& a) {
    if (a.degree() < 1) return Poly::zero(a.field());
    int64_t q = a.q();
    std::vector<int64_t> c(static_cast<size_t>(a.degree()), 0);
    for (int i = 1; i <= a.degree(); ++i) c[static_cast<size_t>(i - 1)] = a.coeff(i) * (i % q) % q;
    return Poly(a.field(), std::move(c));
}

Poly pow_mod(const Poly& base, int64_t e, const Poly& modulus) {
    Poly r = Poly::constant(base.field(), 1);
    Poly b = mod(base, modulus);
    while (e) {
        if (e & 1) r = mod(mul(r, b), modulus);
        b = mod(mul(b, b), modulus);
        e >>= 1;
    }
    return r;
}

Poly frobenius_power(const Poly& x_img, const Poly& modulus) {
    return pow_mod(x_img, x_img.q(), modulus);
}

void MonicPoly::check() {
    if (!p_.is_monic())
        throw std::invalid_argument("MonicPoly: leading coefficient must be 1: " + p_.to_string());
}

bool is_squarefree(const Poly& h) {
    if (h.degree() < 1) throw std::invalid_argument("is_squarefree: need deg >= 1");
    return gcd(h, derivative(h)).is_one();
}

bool is_irreducible(const Poly& p) {
    int d = p.degree();
    if (d < 1) return false;
    if (d == 1) return true;
    // No roots is necessary; sufficient for d <= 3.
    for (int64_t x = 0; x < p.q(); ++x)
        if (p.eval(x) == 0) return false;
    if (d <= 3) return true;
    // Distinct-degree criterion: x^(q^d) = x mod p, and x^(q^(d/l)) != x for
    // prime l | d.
    Poly pm = make_monic(p);
    Poly x = Poly::x(p.field());
    Poly t = mod(x, pm);
    std::vector<Poly> frob;  // frob[k] = x^(q^(k+1)) mod pm
    for (int k = 0; k < d; ++k) {
        t = frobenius_power(t, pm);
        frob.push_back(t);
    }
    if (!(sub(frob[static_cast<size_t>(d - 1)], x).is_zero())) return false;
    for (int l = 2; l <= d; ++l) {
        if (d % l) continue;
        bool lp = true;
        for (int m = 2; m * m <= l; ++m)
            if (l % m == 0) lp = false;
        if (!lp) continue;
        Poly diff = sub(frob[static_cast<size_t>(d / l - 1)], x);
        if (!gcd(diff, pm).is_one()) return false;
    }
    return true;
}

int mobius_mu(const MonicPoly& a) {
    if (a.degree() == 0) return 1;
    const Poly& p = a.poly();
    if (!is_squarefree(p)) return 0;
    // Distinct-degree split of a squarefree polynomial: count factors per degree.
    Poly rem = p;
    Poly x = Poly::x(p.field());
    Poly t = mod(x, rem);
    int count = 0;
    int d = 0;
    while (rem.degree() > 0) {
        ++d;
        if (2 * d > rem.degree()) {
            ++count;  // remainder is itself irreducible
            break;
        }
        t = frobenius_power(t, rem);
        Poly g = gcd(sub(t, mod(x, rem)), rem);
        if (g.degree() > 0) {
            count += g.degree() / d;
            Poly q, r;
            divmod(rem, g, q, r);
            rem = make_monic(q);
            t = mod(t, rem);
        }
    }
    return (count % 2) ? -1 : 1;
}

void enumerate_monic(const FieldOrder& f, int degree, const std::function<void(const Poly&)>& fn) {
    if (degree < 0) throw std::invalid_argument("enumerate_monic: negative degree");
    std::vector<int64_t> c(static_cast<size_t>(degree) + 1, 0);
    c.back() = 1;
    int64_t q = f.q();
    for (;;) {
        fn(Poly(f, c));
        int i = degree - 1;
        while (i >= 0 && c[static_cast<size_t>(i)] == q - 1) {
            c[static_cast<size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++c[static_cast<size_t>(i)];
    }
}

const std::vector<MonicPoly>& primes_of_degree(int r, const FieldOrder& f) {
    if (r < 1) throw std::invalid_argument("primes_of_degree: r must be >= 1");
    static std::mutex mu;
    static std::map<std::pair<int64_t, int>, std::vector<MonicPoly>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(f.q(), r);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    check_budget(std::pow(static_cast<double>(f.q()), r), "primes_of_degree");
    std::vector<MonicPoly> out;
    enumerate_monic(f, r, [&](const Poly& p) {
        if (is_irreducible(p)) out.emplace_back(p);
    });
    // enumeration order is already lexicographic
    return cache.emplace(key, std::move(out)).first->second;
}

int64_t prime_count(int r, const FieldOrder& f) {
    if (r < 1) throw std::invalid_argument("prime_count: r must be >= 1");
    // integer Mobius over divisors of r
    auto mu_int = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    __int128 total = 0;
    for (int d = 1; d <= r; ++d) {
        if (r % d) continue;
        int m = mu_int(d);
        if (!m) continue;
        __int128 pw = 1;
        for (int i = 0; i < r / d; ++i) {
            pw *= f.q();
            if (pw > (static_cast<__int128>(1) << 100))
                throw BudgetError("prime_count: q^r too large");
        }
        total += m * pw;
    }
    total /= r;
    return static_cast<int64_t>(total);
}

int jacobi(const Poly& B, const Poly& A) {
    require_same_field(B, A);
    if (!A.is_monic() || A.degree() < 1)
        throw std::invalid_argument("jacobi: modulus must be monic of positive degree");
    const FieldOrder& f = A.field();
    int64_t q = f.q();
    bool q3mod4 = ((q - 1) / 2) % 2 == 1;

    std::vector<int64_t> a = A.coeffs(), b = B.coeffs();
    for (auto& x : b) {
        x %= q;
        if (x < 0) x += q;
    }
    int sign = 1;
    for (;;) {
        int da = static_cast<int>(a.size()) - 1;
        // b mod a (a monic)
        int db = static_cast<int>(b.size()) - 1;
        while (db >= 0 && b[static_cast<size_t>(db)] == 0) --db;
        for (int i = db; i >= da; --i) {
            int64_t cfac = b[static_cast<size_t>(i)];
            if (cfac) {
                b[static_cast<size_t>(i)] = 0;
                for (int j = 0; j < da; ++j) {
                    auto& slot = b[static_cast<size_t>(i - da + j)];
                    slot = (slot - cfac * a[static_cast<size_t>(j)]) % q;
                    if (slot < 0) slot += q;
                }
            }
        }
        db = std::min(db, da - 1);
        while (db >= 0 && b[static_cast<size_t>(db)] == 0) --db;
        if (db < 0) return 0;  // shared factor (or B = 0 mod A)
        // (c*Bm / A) = legendre(c)^deg A * (Bm / A)
        int64_t lead = b[static_cast<size_t>(db)];
        if (lead != 1) {
            if (da % 2 == 1) sign *= f.legendre(lead);
            int64_t li = f.inv(lead);
            for (int j = 0; j <= db; ++j)
                b[static_cast<size_t>(j)] = b[static_cast<size_t>(j)] * li % q;
        }
        if (db == 0) return sign;
        // reciprocity flip with sign (-1)^(((q-1)/2) deg A deg B)
        if (q3mod4 && (da % 2 == 1) && (db % 2 == 1)) sign = -sign;
        b.resize(static_cast<size_t>(db) + 1);
        std::swap(a, b);
    }
}

int jacobi_euler(const Poly& B, const Poly& P) {
    if (!is_irreducible(P)) throw std::invalid_argument("jacobi_euler: modulus must be prime");
    Poly pm = make_monic(P);
    Poly r = mod(B, pm);
    if (r.is_zero()) return 0;
    // |P| = q^deg P; exponent (|P|-1)/2 computed by repeated squaring in stages
    // to avoid overflowing the int64 exponent for large q^d.
    int d = pm.degree();
    int64_t q = P.q();
    // B^((q^d-1)/2) = B^((q-1)/2 * (1 + q + ... + q^(d-1)))
    // computed as ((B^(1+q+...+q^(d-1)))^((q-1)/2)); the inner part is the
    // field norm, a constant mod P.
    Poly acc = r;
    Poly frob = r;
    for (int k = 1; k < d; ++k) {
        frob = frobenius_power(frob, pm);
        acc = mod(mul(acc, frob), pm);
    }
    Poly e = pow_mod(acc, (q - 1) / 2, pm);
    if (e.is_one()) return 1;
    if (e.degree() == 0 && e.coeff(0) == q - 1) return -1;
    throw IdentityError("jacobi_euler: Euler criterion did not yield +-1");
}

bool is_perfect_square(const Poly& d, Poly* sqrt_out) {
    if (d.is_zero()) {
        if (sqrt_out) *sqrt_out = d;
        return true;
    }
    if (d.degree() % 2 != 0) return false;
    const FieldOrder& f = d.field();
    int64_t q = f.q();
    // The leading coefficient must be a square in F_q.
    if (f.legendre(d.lead()) != 1) return false;
    int m = d.degree() / 2;
    // leading coefficient square root by search (q <= 997)
    int64_t lead_rt = 0;
    for (int64_t a = 1; a < q; ++a)
        if (a * a % q == d.lead()) {
            lead_rt = a;
            break;
        }
    std::vector<int64_t> e(static_cast<size_t>(m) + 1, 0);
    e[static_cast<size_t>(m)] = lead_rt;
    int64_t inv2lead = f.inv(2 * lead_rt % q);
    for (int k = 1; k <= m; ++k) {
        // match coefficient of x^(2m-k)
        int64_t s = 0;
        for (int i = m - k + 1; i < m; ++i) {
            int j = 2 * m - k - i;
            if (j >= 0 && j <= m) s = (s + e[static_cast<size_t>(i)] * e[static_cast<size_t>(j)]) % q;
        }
        int64_t target = (d.coeff(2 * m - k) - s) % q;
        if (target < 0) target += q;
        e[static_cast<size_t>(m - k)] = target * inv2lead % q;
    }
    Poly cand(f, e);
    if (mul(cand, cand) == d) {
        if (sqrt_out) *sqrt_out = cand;
        return true;
    }
    return false;
}

Poly parse_poly(const FieldOrder& f, const std::string& text) {
    // grammar: term ('+' term)*, term = coef | coef? 'x' ('^' exp)?
    std::vector<int64_t> coeffs;
    size_t i = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("parse_poly: " + msg + " at position " + std::to_string(i) +
                                    " in \"" + text + "\"");
    };
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip_ws();
    if (i >= text.size()) fail("empty input");
    bool first = true;
    while (i < text.size()) {
        skip_ws();
        int64_t sign = 1;
        if (!first || text[i] == '+' || text[i] == '-') {
            if (i >= text.size() || (text[i] != '+' && text[i] != '-')) fail("expected '+' or '-'");
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        }
        first = false;
        int64_t coef = 1;
        bool have_digits = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            coef = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                coef = coef * 10 + (text[i] - '0');
                if (coef > (1 << 30)) fail("coefficient too large");
                ++i;
            }
            have_digits = true;
        }
        int64_t expn = 0;
        if (i < text.size() && text[i] == 'x') {
            ++i;
            expn = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    fail("expected exponent digits");
                expn = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    expn = expn * 10 + (text[i] - '0');
                    if (expn > 4096) fail("exponent too large");
                    ++i;
                }
            }
        } else if (!have_digits) {
            fail("expected coefficient or 'x'");
        }
        if (static_cast<size_t>(expn) >= coeffs.size()) coeffs.resize(static_cast<size_t>(expn) + 1, 0);
        coeffs[static_cast<size_t>(expn)] += sign * coef;
        skip_ws();
        if (i < text.size() && text[i] != '+' && text[i] != '-') fail("unexpected character");
    }
    return Poly(f, std::move(coeffs));
}

}  // namespace hyperell::ffq
