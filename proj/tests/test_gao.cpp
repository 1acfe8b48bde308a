#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hyperell/gao.hpp"
#include "hyperell/rmt.hpp"
#include "hyperell/util.hpp"

using namespace hyperell;
using namespace hyperell::gao;
using testfn::Family;
using testfn::TestFn;

TEST_CASE("D values") {
    // m = 1, triangle s = 1.5: -(s-1)^2/(2s) = -1/12
    auto d = D_value(FnSet({TestFn(Family::triangle, 1.5)}));
    CHECK(d.value == doctest::Approx(-1.0 / 12.0).epsilon(1e-7));
    // support below 1: all regions empty
    CHECK(D_value(FnSet({TestFn(Family::triangle, 0.9)})).value == 0.0);
    // m = 2 with both supports below the reach of the constraint
    CHECK(D_value(FnSet({TestFn(Family::triangle, 0.4), TestFn(Family::triangle, 0.4)})).value ==
          0.0);
}

TEST_CASE("B structural identities") {
    // m = 1: B = D
    TestFn u(Family::triangle, 1.3);
    CHECK(B_value(FnSet({u})).value == doctest::Approx(D_value(FnSet({u})).value).epsilon(1e-10));
    // m = 2: B = 2 pair_integral + D
    TestFn a(Family::triangle, 0.8), b(Family::sinc4, 0.9);
    auto ga = testfn::product_transform({a}, testfn::default_grid_h({a, b}));
    auto gb = testfn::product_transform({b}, testfn::default_grid_h({a, b}));
    double pi_ab = testfn::pair_integral(ga, gb).value;
    auto bv = B_value(FnSet({a, b}));
    auto dv = D_value(FnSet({a, b}));
    CHECK(bv.value == doctest::Approx(2.0 * pi_ab + dv.value).epsilon(1e-9));
    // small supports: only the pairing term survives
    TestFn s1(Family::triangle, 0.4), s2(Family::triangle, 0.4);
    auto g1 = testfn::product_transform({s1}, testfn::default_grid_h({s1, s2}));
    auto g2 = testfn::product_transform({s2}, testfn::default_grid_h({s1, s2}));
    CHECK(B_value(FnSet({s1, s2})).value ==
          doctest::Approx(2.0 * testfn::pair_integral(g1, g2).value).epsilon(1e-9));
}

TEST_CASE("A at n = 1: closed form and known values") {
    CHECK(A_value(FnSet({TestFn(Family::triangle, 1.5)})).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(A_value(FnSet({TestFn(Family::triangle, 0.5)})).value ==
          doctest::Approx(0.75).epsilon(1e-8));

    Rng rng(1234);
    for (int i = 0; i < 20; ++i) {
        double s = 0.05 + 1.9 * rng.next_double();
        Family fam = (rng.next() % 2) ? Family::triangle : Family::sinc4;
        TestFn f(fam, s);
        double a = A_value(FnSet({f})).value;
        CHECK(a == doctest::Approx(a1_closed_form(f)).epsilon(1e-8));
        // and the kernel side is the same number at n = 1
        CHECK(a == doctest::Approx(rmt::kernel_integral({f}, 1).value).epsilon(1e-8));
    }
}

TEST_CASE("A multilinearity at n = 2") {
    TestFn f(Family::triangle, 0.5), gfn(Family::sinc4, 0.6), h(Family::triangle, 0.7);
    double alpha = 0.7, beta = -1.3;
    TestFn combo = f.scaled(alpha) + gfn.scaled(beta);
    double lhs = A_value(FnSet({combo, h})).value;
    double rhs = alpha * A_value(FnSet({f, h})).value + beta * A_value(FnSet({gfn, h})).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(5e-6));
}

TEST_CASE("A permutation symmetry") {
    TestFn a(Family::triangle, 0.5), b(Family::sinc4, 0.6), c(Family::triangle, 0.7);
    double v1 = A_value(FnSet({a, b, c})).value;
    double v2 = A_value(FnSet({c, a, b})).value;
    double v3 = A_value(FnSet({b, c, a})).value;
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-9));
    CHECK(v1 == doctest::Approx(v3).epsilon(1e-9));
}

TEST_CASE("B/D consistency at m = 2") {
    TestFn a(Family::triangle, 0.8), b(Family::triangle, 0.9);
    auto ga = testfn::product_transform({a}, testfn::default_grid_h({a, b}));
    auto gb = testfn::product_transform({b}, testfn::default_grid_h({a, b}));
    double pairing = 2.0 * testfn::pair_integral(ga, gb).value;
    CHECK(B_value(FnSet({a, b})).value - pairing ==
          doctest::Approx(D_value(FnSet({a, b})).value).epsilon(1e-9));
}

TEST_CASE("A at n = 2 matches the kernel quadrature") {
    TestFn f1(Family::sinc4, 0.6), f2(Family::sinc4, 0.6);
    double a = A_value(FnSet({f1, f2})).value;
    double k = rmt::kernel_integral({f1, f2}, 2).value;
    CHECK(std::abs(a - k) <= 5e-4);
}

TEST_CASE("support constraint enforced") {
    CHECK_THROWS_AS(FnSet({TestFn(Family::triangle, 1.2), TestFn(Family::triangle, 0.9)}),
                    std::invalid_argument);
}
