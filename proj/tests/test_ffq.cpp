#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "hyperell/exact.hpp"
#include "hyperell/ffq.hpp"
#include "hyperell/util.hpp"

using namespace hyperell;
using namespace hyperell::ffq;
using exact::BigInt;
using exact::Rat;

namespace {

Poly make(const FieldOrder& f, std::initializer_list<int64_t> c) {
    return Poly(f, std::vector<int64_t>(c));
}

}  // namespace

TEST_CASE("bigint arithmetic agrees with int64 on randoms") {
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
        int64_t a = static_cast<int64_t>(rng.next() % 2000001) - 1000000;
        int64_t b = static_cast<int64_t>(rng.next() % 2000001) - 1000000;
        CHECK((BigInt(a) + BigInt(b)).to_int64() == a + b);
        CHECK((BigInt(a) - BigInt(b)).to_int64() == a - b);
        CHECK((BigInt(a) * BigInt(b)).to_int64() == a * b);
        if (b != 0) {
            BigInt q, r;
            BigInt::divrem(BigInt(a), BigInt(b), q, r);
            CHECK(q.to_int64() == a / b);
            CHECK(r.to_int64() == a % b);
        }
        CHECK((BigInt(a) < BigInt(b)) == (a < b));
    }
    CHECK(BigInt::pow(BigInt(10), 25).to_string() == "10000000000000000000000000");
    // frozen from python pow(7, 40, 10**9+7) and 7**40
    CHECK((BigInt::pow(BigInt(7), 40) % BigInt(1000000007)).to_int64() == 339761968);
    CHECK(BigInt::pow(BigInt(7), 40).to_string() == "6366805760909027985741435139224001");
    CHECK(Rat(BigInt(6), BigInt(-8)).to_string() == "-3/4");
    CHECK((Rat(1, 3) + Rat(1, 6) == Rat(1, 2)));
}

TEST_CASE("poly_arith ring basics") {
    FieldOrder f3(3);
    // (x+1)(x+2) = x^2 + 2 over F_3
    CHECK(mul(make(f3, {1, 1}), make(f3, {2, 1})) == make(f3, {2, 0, 1}));
    // gcd(x^2+2, x+2) = x+2
    CHECK(gcd(make(f3, {2, 0, 1}), make(f3, {2, 1})) == make(f3, {2, 1}));
    // derivative(x^3 + x) = 1 in char 3
    CHECK(derivative(make(f3, {0, 1, 0, 1})) == make(f3, {1}));

    Poly q, r;
    divmod(make(f3, {1, 2, 0, 1}), make(f3, {2, 1}), q, r);
    CHECK(add(mul(q, make(f3, {2, 1})), r) == make(f3, {1, 2, 0, 1}));
    CHECK(r.degree() < 1);

    CHECK_THROWS_AS(divmod(make(f3, {1}), Poly::zero(f3), q, r), std::invalid_argument);
    FieldOrder f5(5);
    CHECK_THROWS_AS(add(make(f3, {1}), make(f5, {1})), std::invalid_argument);
    CHECK_THROWS_AS(FieldOrder(9), std::invalid_argument);
    CHECK_THROWS_AS(FieldOrder(2), std::invalid_argument);

    CHECK(make(f3, {1, 2, 0, 1}).to_string() == "x^3+2x+1");
    CHECK(parse_poly(f3, "x^3+2x+1") == make(f3, {1, 2, 0, 1}));
    CHECK(parse_poly(f3, "x^2 + 2") == make(f3, {2, 0, 1}));
    CHECK_THROWS_AS(parse_poly(f3, "x^^2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_poly(f3, ""), std::invalid_argument);
}

TEST_CASE("squarefree and mobius") {
    FieldOrder f3(3), f5(5);
    CHECK(is_squarefree(make(f3, {0, 1, 0, 1})));        // x^3 + x = x(x^2+1)
    CHECK_FALSE(is_squarefree(make(f3, {1, 2, 1})));     // (x+1)^2
    CHECK_FALSE(is_squarefree(make(f5, {0, 0, 0, 1})));  // x^3

    CHECK(mobius_mu(MonicPoly(f3, {1})) == 1);
    CHECK(mobius_mu(MonicPoly(f3, {1, 0, 1})) == -1);  // x^2+1 irreducible mod 3
    CHECK(mobius_mu(MonicPoly(f3, {0, 1, 1})) == 1);   // x(x+1)

    // mu multiplicativity oracle: against explicit factor counting by trial
    // division over all monic of degree <= 5, q = 3
    for (int d = 1; d <= 5; ++d) {
        enumerate_monic(f3, d, [&](const Poly& p) {
            // factor count by trial division by primes of degree <= d
            Poly rem = p;
            int count = 0;
            bool squarefree = true;
            for (int e = 1; e <= d && rem.degree() > 0; ++e) {
                for (const auto& pr : primes_of_degree(e, f3)) {
                    int mult = 0;
                    for (;;) {
                        Poly quo, rr;
                        divmod(rem, pr.poly(), quo, rr);
                        if (!rr.is_zero()) break;
                        rem = quo;
                        ++mult;
                    }
                    if (mult > 1) squarefree = false;
                    if (mult > 0) ++count;
                    if (rem.degree() == 0) break;
                }
            }
            int expect = squarefree ? (count % 2 ? -1 : 1) : 0;
            CHECK(mobius_mu(MonicPoly(p)) == expect);
        });
    }
}

TEST_CASE("prime enumeration and counting") {
    FieldOrder f3(3), f5(5), f7(7);
    auto& lin = primes_of_degree(1, f3);
    REQUIRE(lin.size() == 3);
    CHECK(lin[0].to_string() == "x");
    CHECK(lin[1].to_string() == "x+1");
    CHECK(lin[2].to_string() == "x+2");
    CHECK(prime_count(1, f3) == 3);
    CHECK(primes_of_degree(2, f3).size() == 3);
    CHECK(prime_count(2, f3) == 3);
    CHECK(primes_of_degree(3, f3).size() == 8);
    CHECK(prime_count(3, f3) == 8);

    // necklace identity: sum_{d | r} d pi(d) = q^r for r <= 12
    for (const auto& f : {f3, f5, f7}) {
        for (int r = 1; r <= 12; ++r) {
            int64_t total = 0;
            for (int d = 1; d <= r; ++d)
                if (r % d == 0) total += static_cast<int64_t>(d) * prime_count(d, f);
            int64_t qr = 1;
            for (int i = 0; i < r; ++i) qr *= f.q();
            CHECK(total == qr);
        }
    }

    // list completeness against the count, a few (q, r)
    CHECK(static_cast<int64_t>(primes_of_degree(5, f3).size()) == prime_count(5, f3));
    CHECK(static_cast<int64_t>(primes_of_degree(3, f5).size()) == prime_count(3, f5));
    CHECK(static_cast<int64_t>(primes_of_degree(2, f7).size()) == prime_count(2, f7));

    // squarefree counts: q^d - q^(d-1) for d >= 2
    for (int d = 2; d <= 8; ++d) {
        int64_t cnt = 0;
        enumerate_monic(f3, d, [&](const Poly& p) { cnt += is_squarefree(p); });
        int64_t expect = 1;
        for (int i = 0; i < d - 1; ++i) expect *= 3;
        expect *= 3 - 1;
        CHECK(cnt == expect);
    }
}

TEST_CASE("irreducibility test agrees with root-test shortcut on low degree") {
    FieldOrder f5(5);
    enumerate_monic(f5, 1, [&](const Poly& p) { CHECK(is_irreducible(p)); });
    for (int d = 2; d <= 3; ++d) {
        enumerate_monic(f5, d, [&](const Poly& p) {
            bool no_root = true;
            for (int64_t x = 0; x < 5; ++x)
                if (p.eval(x) == 0) no_root = false;
            CHECK(is_irreducible(p) == no_root);
        });
    }
    // degree 4: x^4+x^3+x^2+x+1 factors mod 5 (5th cyclotomic, 5 | 5^4-1...)
    CHECK(is_irreducible(make(f5, {2, 0, 0, 0, 1})));        // x^4+2 irreducible mod 5
    CHECK_FALSE(is_irreducible(make(f5, {1, 1, 1, 1, 1})));  // (x-1)^4... has root 1? eval(1)=5=0
}

TEST_CASE("jacobi symbol examples") {
    FieldOrder f3(3), f5(5);
    Poly x = Poly::x(f3);
    CHECK(jacobi(x, make(f3, {1, 1})) == -1);  // (x / x+1) over F_3
    CHECK(jacobi(Poly::x(f5), Poly(f5, {1, 1})) == 1);
    Poly p = make(f3, {1, 0, 1});  // x^2+1 prime
    CHECK(jacobi(p, p) == 0);
    CHECK(jacobi(make(f3, {2}), make(f3, {0, 1})) == -1);  // (2/x): 2 non-residue mod 3
}

TEST_CASE("jacobi multiplicativity on random triples") {
    FieldOrder f5(5);
    Rng rng(99);
    auto rand_poly = [&](int maxdeg, bool monic) {
        int d = 1 + static_cast<int>(rng.next() % static_cast<uint64_t>(maxdeg));
        std::vector<int64_t> c(static_cast<size_t>(d) + 1);
        for (auto& v : c) v = rng.next_mod(5);
        if (monic)
            c.back() = 1;
        else if (c.back() == 0)
            c.back() = 1 + rng.next_mod(4);
        return Poly(f5, c);
    };
    for (int i = 0; i < 500; ++i) {
        Poly b1 = rand_poly(4, false), b2 = rand_poly(4, false);
        Poly a1 = rand_poly(3, true), a2 = rand_poly(3, true);
        CHECK(jacobi(mul(b1, b2), a1) == jacobi(b1, a1) * jacobi(b2, a1));
        CHECK(jacobi(b1, mul(a1, a2)) == jacobi(b1, a1) * jacobi(b1, a2));
    }
}

TEST_CASE("euler criterion agreement, exhaustive") {
    for (int64_t q : {3, 5}) {
        FieldOrder f(q);
        for (int dp = 1; dp <= 3; ++dp) {
            for (const auto& p : primes_of_degree(dp, f)) {
                for (int db = 0; db <= 3; ++db) {
                    enumerate_monic(f, db, [&](const Poly& b) {
                        if (gcd(b, p.poly()).is_one())
                            CHECK(jacobi(b, p.poly()) == jacobi_euler(b, p.poly()));
                    });
                }
            }
        }
    }
}

TEST_CASE("quadratic reciprocity") {
    for (int64_t q : {3, 5}) {
        FieldOrder f(q);
        bool trivial_sign = ((q - 1) / 2) % 2 == 0;
        for (int da = 1; da <= 3; ++da) {
            enumerate_monic(f, da, [&](const Poly& a) {
                for (int db = 1; db <= 3; ++db) {
                    enumerate_monic(f, db, [&](const Poly& b) {
                        if (!gcd(a, b).is_one()) return;
                        int sign = 1;
                        if (!trivial_sign && da % 2 == 1 && db % 2 == 1) sign = -1;
                        CHECK(jacobi(b, a) == sign * jacobi(a, b));
                        if (trivial_sign) CHECK(jacobi(b, a) == jacobi(a, b));
                    });
                }
            });
        }
    }
}

TEST_CASE("prime list form is budgeted, count form is not") {
    FieldOrder f3(3);
    CHECK_THROWS_AS(primes_of_degree(25, f3), BudgetError);  // 3^25 > 1e9
    CHECK(prime_count(25, f3) == 33891544368);  // necklace formula, frozen
}

TEST_CASE("perfect square detection") {
    FieldOrder f3(3);
    Poly e = make(f3, {2, 1, 1});
    Poly sq = mul(e, e);
    Poly root;
    CHECK(is_perfect_square(sq, &root));
    CHECK(mul(root, root) == sq);
    CHECK_FALSE(is_perfect_square(make(f3, {0, 1, 0, 1})));
    int64_t found = 0;
    enumerate_monic(f3, 4, [&](const Poly& p) { found += is_perfect_square(p); });
    CHECK(found == 9);  // squares of the 9 monic quadratics
}
