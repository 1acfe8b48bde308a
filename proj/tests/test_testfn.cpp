#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hyperell/testfn.hpp"
#include "hyperell/util.hpp"

using namespace hyperell;
using namespace hyperell::testfn;

TEST_CASE("closed-form values") {
    TestFn tri(Family::triangle, 1.5);
    CHECK(tri.fhat(0.0) == doctest::Approx(1.0));
    CHECK(tri.f(0.0) == doctest::Approx(1.5).epsilon(1e-12));  // f(0) = s
    CHECK(tri.fhat(1.5) == 0.0);
    CHECK(tri.fhat(-1.5) == 0.0);
    CHECK(tri.fhat(0.75) == doctest::Approx(0.5));

    TestFn s4(Family::sinc4, 0.9);
    CHECK(s4.fhat(0.9) == 0.0);
    CHECK(s4.fhat(0.0) == doctest::Approx(0.9 / 3.0));  // s/3 at the origin
    CHECK(s4.f(0.0) == doctest::Approx(0.9 * 0.9 / 4.0));
    // f(0) = integral of fhat
    double quad = adaptive_gl([&](double u) { return s4.fhat(u); }, 0.0, 0.9, 1e-12);
    CHECK(2.0 * quad == doctest::Approx(s4.f(0.0)).epsilon(1e-10));
}

TEST_CASE("sinc4 transform equals the numeric self-convolution of the half triangle") {
    TestFn s4(Family::sinc4, 1.2);
    TestFn half(Family::triangle, 0.6);
    for (double u : {0.0, 0.1, 0.3, 0.45, 0.6, 0.8, 1.0, 1.15, 1.3}) {
        double conv = adaptive_gl([&](double v) { return half.fhat(v) * half.fhat(u - v); },
                                  -0.6, 0.6, 1e-12);
        CHECK(s4.fhat(u) == doctest::Approx(conv).epsilon(1e-9));
    }
}

TEST_CASE("parseval spot check") {
    for (Family fam : {Family::triangle, Family::sinc4}) {
        for (double s : {0.5, 1.0, 1.5}) {
            TestFn fn(fam, s);
            double x_side = 2.0 * adaptive_gl([&](double x) { return fn.f(x) * fn.f(x); }, 0.0,
                                              std::max(400.0, 60.0 / s), 1e-11);
            double u_side =
                2.0 * adaptive_gl([&](double u) { return fn.fhat(u) * fn.fhat(u); }, 0.0, s, 1e-12);
            CHECK(x_side == doctest::Approx(u_side).epsilon(1e-7));
        }
    }
}

TEST_CASE("positivity of both families") {
    Rng rng(5);
    for (Family fam : {Family::triangle, Family::sinc4}) {
        TestFn fn(fam, 0.8);
        for (int i = 0; i < 2000; ++i) {
            double x = (rng.next_double() - 0.5) * 50.0;
            CHECK(fn.f(x) >= 0.0);
            CHECK(fn.fhat(x) >= 0.0);
        }
    }
}

TEST_CASE("spec parsing") {
    TestFn a = TestFn::parse("triangle:s=1.5");
    CHECK(a.support() == doctest::Approx(1.5));
    CHECK(a.spec() == "triangle:s=1.5");
    TestFn b = TestFn::parse("sinc4:s=0.9");
    CHECK(b.atoms()[0].fam == Family::sinc4);
    CHECK_THROWS_AS(TestFn::parse("gauss:s=1"), std::invalid_argument);
    CHECK_THROWS_AS(TestFn::parse("triangle"), std::invalid_argument);
    CHECK_THROWS_AS(TestFn::parse("triangle:s="), std::invalid_argument);
    CHECK_THROWS_AS(TestFn::parse("triangle:s=0"), std::invalid_argument);
    CHECK_THROWS_AS(TestFn::parse("triangle:s=1.0x"), std::invalid_argument);
}

TEST_CASE("product transform") {
    // |F| = 1 is the sampled closed form
    TestFn tri(Family::triangle, 1.0);
    TransformGrid g1 = product_transform({tri});
    CHECK(g1.err == 0.0);
    CHECK(g1.value(0.3) == doctest::Approx(0.7).epsilon(1e-9));

    // two unit triangles: transform of the product at 0 is 2/3, within the
    // reported grid error
    TransformGrid g2 = product_transform({tri, tri});
    CHECK(std::abs(g2.at(0) - 2.0 / 3.0) <= g2.err + 1e-12);
    CHECK(g2.err <= 1e-6);
    CHECK(g2.support == doctest::Approx(2.0));

    // symmetry on the grid is bit-exact
    for (int i = 1; i <= g2.n; i += 97) CHECK(g2.at(i) == g2.at(-i));

    // support certificate: vanishes outside (-sum s, sum s)
    TestFn small(Family::triangle, 0.4);
    TestFn s4(Family::sinc4, 0.7);
    TransformGrid g3 = product_transform({small, s4});
    for (double x : {1.100001, 1.2, 1.5, 3.0}) CHECK(std::abs(g3.value(x)) <= 1e-12);

    CHECK_THROWS_AS(product_transform({TestFn(Family::triangle, 2.5), TestFn(Family::triangle, 1.6)}),
                    std::invalid_argument);
}

TEST_CASE("convolution associativity for |F| = 3") {
    TestFn a(Family::triangle, 0.5), b(Family::triangle, 0.6), c(Family::sinc4, 0.7);
    TransformGrid abc = product_transform({a, b, c});
    TransformGrid bca = product_transform({b, c, a});
    double tol = 2.0 * (abc.err + bca.err) + 1e-12;
    for (double x : {0.0, 0.2, 0.5, 0.9, 1.3, 1.7}) {
        CHECK(std::abs(abc.value(x) - bca.value(x)) <= tol);
    }
}

TEST_CASE("pair integrals") {
    TestFn tri1(Family::triangle, 1.0);
    TransformGrid g1 = product_transform({tri1});
    QuadResult r = pair_integral(g1, g1);
    CHECK(r.value == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    CHECK(r.ok);

    TestFn tri2(Family::triangle, 2.0 - 1e-9);
    TransformGrid g2 = product_transform({tri2});
    QuadResult r2 = pair_integral(g2, g2);
    CHECK(r2.value == doctest::Approx(2.0 / 3.0).epsilon(1e-8));

    // zero function
    TestFn zero = tri1.scaled(0.0);
    TransformGrid gz = product_transform({zero});
    CHECK(pair_integral(g1, gz).value == 0.0);
}

TEST_CASE("region integrals in one dimension") {
    TestFn tri(Family::triangle, 1.5);
    TransformGrid g = product_transform({tri});
    std::vector<const TransformGrid*> grids{&g};
    // I = {0}: impossible region
    CHECK(region_integral({0}, grids).value == 0.0);
    // I empty: integral over t >= 1 of fhat = (s-1)^2/(2s)
    QuadResult r = region_integral({}, grids);
    CHECK(std::abs(r.value - 0.5 * 0.5 / 3.0) <= 1e-7);  // target for d <= 2
    CHECK(r.ok);
    // support below 1: zero
    TestFn small(Family::triangle, 0.9);
    TransformGrid gs = product_transform({small});
    std::vector<const TransformGrid*> grids_s{&gs};
    CHECK(region_integral({}, grids_s).value == 0.0);
}

TEST_CASE("region integral in two dimensions against a closed form") {
    // triangles s1 = s2 = 1.8, I = {}: integral over t1, t2 >= 0, t1 + t2 >= 1
    // of fhat1 fhat2. Closed form via complement: (integral_0^s fhat)^2 minus
    // the simplex part. Computed here with an independent 2d Simpson oracle.
    TestFn tri(Family::triangle, 1.8);
    TransformGrid g = product_transform({tri});
    std::vector<const TransformGrid*> grids{&g, &g};
    QuadResult r = region_integral({}, grids);
    int n = 1200;
    double h = 1.8 / n;
    double oracle = 0.0;
    for (int i = 0; i <= n; ++i) {
        double wi = (i == 0 || i == n) ? 0.5 : 1.0;
        for (int j = 0; j <= n; ++j) {
            double wj = (j == 0 || j == n) ? 0.5 : 1.0;
            double t1 = i * h, t2 = j * h;
            if (t1 + t2 >= 1.0) oracle += wi * wj * tri.fhat(t1) * tri.fhat(t2);
        }
    }
    oracle *= h * h;
    CHECK(r.value == doctest::Approx(oracle).epsilon(2e-4));
    // I = {0}: t1 <= t2 - 1
    QuadResult r2 = region_integral({0}, grids);
    double oracle2 = 0.0;
    for (int i = 0; i <= n; ++i) {
        double wi = (i == 0 || i == n) ? 0.5 : 1.0;
        for (int j = 0; j <= n; ++j) {
            double wj = (j == 0 || j == n) ? 0.5 : 1.0;
            double t1 = i * h, t2 = j * h;
            if (t1 <= t2 - 1.0) oracle2 += wi * wj * tri.fhat(t1) * tri.fhat(t2);
        }
    }
    oracle2 *= h * h;
    CHECK(r2.value == doctest::Approx(oracle2).epsilon(5e-4));
}

TEST_CASE("time side product integral equals transform at zero") {
    TestFn a(Family::triangle, 0.9), b(Family::sinc4, 0.8);
    TransformGrid g = product_transform({a, b});
    QuadResult ts = time_side_product_integral({a, b});
    CHECK(ts.value == doctest::Approx(g.at(0)).epsilon(1e-7));
}

TEST_CASE("linearity helpers") {
    TestFn tri(Family::triangle, 1.0);
    TestFn two = tri.scaled(2.0);
    CHECK(two.f(0.3) == doctest::Approx(2.0 * tri.f(0.3)));
    TestFn sum = tri + TestFn(Family::sinc4, 0.5);
    CHECK(sum.fhat(0.2) ==
          doctest::Approx(tri.fhat(0.2) + TestFn(Family::sinc4, 0.5).fhat(0.2)));
    CHECK(sum.support() == doctest::Approx(1.0));
}
