#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lojex/root_isolation.hpp"

#include <cmath>
#include <random>

using namespace lojex;

namespace {

Polynomial uni(const std::string& text) {
    std::vector<std::string> names{"x1"};
    return parse_polynomial(text, names);
}

// Plain sign-change bisection: the independent oracle for simple roots.
double bisect(double lo, double hi, const Polynomial& p) {
    std::vector<double> pt(1);
    auto f = [&](double x) {
        pt[0] = x;
        return p.eval_double(pt);
    };
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sqrt(2) isolated to tolerance") {
    Polynomial p = uni("x1^2 - 2");
    auto roots = isolate_real_roots(p, Rational(0), Rational(2), Rational(1, 1000000000));
    REQUIRE(roots.size() == 1);
    double expected = bisect(1.0, 2.0, p);  // 1.41421356...
    CHECK(roots[0].midpoint() == doctest::Approx(expected).epsilon(1e-8));
    CHECK(Rational(roots[0].hi - roots[0].lo) <= Rational(1, 1000000000));
}

TEST_CASE("no real roots") {
    Polynomial p = uni("x1^2 + 1");
    CHECK(isolate_real_roots(p, Rational(-10), Rational(10), Rational(1, 1000)).empty());
}

TEST_CASE("two roots of x(x-1)") {
    Polynomial p = uni("x1^2 - x1");
    auto roots = isolate_real_roots(p, Rational(-1), Rational(2), Rational(1, 1024));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].midpoint() == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(roots[1].midpoint() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("multiple roots are still isolated") {
    Polynomial p = uni("(x1 - 1)^2 * (x1 + 2)");
    auto roots = isolate_real_roots(p, Rational(-5), Rational(5), Rational(1, 4096));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].midpoint() == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(roots[1].midpoint() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("roots at interval endpoints") {
    Polynomial p = uni("x1 * (x1 - 2)");
    auto roots = isolate_real_roots(p, Rational(0), Rational(2), Rational(1, 100));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].lo == 0);
    CHECK(roots[0].hi == 0);
    CHECK(roots[1].lo == 2);
    CHECK(roots[1].hi == 2);
}

TEST_CASE("finds exactly the planted rational roots") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> num(-6, 6);
    for (int t = 0; t < 25; ++t) {
        // Product of distinct linear factors with rational roots.
        std::vector<Rational> planted;
        Polynomial p = Polynomial::constant(1, Rational(1));
        for (int k = 0; k < 4; ++k) {
            Rational r(num(rng), 1 + (k % 3));
            r.canonicalize();
            bool dup = false;
            for (const auto& q : planted)
                if (q == r) dup = true;
            if (dup) continue;
            planted.push_back(r);
            p = p * (Polynomial::variable(1, 0) - Polynomial::constant(1, r));
        }
        auto roots = isolate_real_roots(p, Rational(-10), Rational(10), Rational(1, 1 << 20));
        REQUIRE(roots.size() == planted.size());
        std::sort(planted.begin(), planted.end());
        for (size_t i = 0; i < planted.size(); ++i) {
            CHECK(roots[i].lo <= planted[i]);
            CHECK(planted[i] <= roots[i].hi);
        }
    }
}

TEST_CASE("zero polynomial and misuse rejected") {
    CHECK_THROWS_AS(isolate_real_roots(Polynomial::zero(1), Rational(0), Rational(1), Rational(1, 10)),
                    std::domain_error);
    std::vector<std::string> names{"x1", "x2"};
    Polynomial two = parse_polynomial("x1 + x2", names);
    CHECK_THROWS_AS(isolate_real_roots(two, Rational(0), Rational(1), Rational(1, 10)),
                    std::domain_error);
}
