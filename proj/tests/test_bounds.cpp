#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lojex/bounds.hpp"

using namespace lojex;

namespace {

// Independent recomputation of the power expressions by repeated
// multiplication; no mpz_pow on this side.
BigInt slow_pow(long base, int exp) {
    BigInt r(1);
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

BigInt slow_r(int n, int d) {
    BigInt a = BigInt(2 * d) * (2 * d - 1);
    BigInt b = BigInt(d) * slow_pow(3 * d - 2, n);
    return (a > b ? a : b) + 1;
}

BigInt slow_s(int n, int d) { return 2 * slow_pow(2 * d - 1, 3 * n + 1); }

const BoundEntry* find_entry(const BoundReport& rep, const std::string& name) {
    for (const auto& e : rep.entries)
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace

TEST_CASE("spot values") {
    CHECK(r_bound(2, 2) == 33);
    CHECK(r_bound(1, 3) == 31);
    CHECK(r_bound(3, 2) == 129);
    CHECK(s_bound(1, 2) == 162);
    CHECK(s_bound(2, 2) == 4374);
    CHECK(s_bound(2, 3) == 156250);
}

TEST_CASE("formula grid matches independent recomputation") {
    for (int n = 1; n <= 8; ++n)
        for (int d = 2; d <= 10; ++d) {
            CHECK(r_bound(n, d) == slow_r(n, d));
            CHECK(s_bound(n, d) == slow_s(n, d));
        }
}

TEST_CASE("monotonicity in n and d") {
    for (int n = 1; n <= 8; ++n)
        for (int d = 2; d <= 10; ++d) {
            if (d < 10) {
                CHECK(r_bound(n, d) < r_bound(n, d + 1));
                CHECK(s_bound(n, d) < s_bound(n, d + 1));
            }
            if (n < 8) {
                CHECK(r_bound(n, d) < r_bound(n + 1, d));
                CHECK(s_bound(n, d) < s_bound(n + 1, d));
            }
        }
}

TEST_CASE("sharper bound under the extra hypothesis") {
    for (int n = 2; n <= 8; ++n)
        for (int d = 2; d <= 10; ++d) CHECK(r_bound(n, d) < s_bound(n, d));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(r_bound(0, 3), std::domain_error);
    CHECK_THROWS_AS(r_bound(2, 1), std::domain_error);
    CHECK_THROWS_AS(s_bound(2, 0), std::domain_error);
}

TEST_CASE("rho bounds: polynomial with isolated zero") {
    Assumptions a;
    a.polynomial_f = true;
    a.isolated_zero = true;
    auto rep = rho_bounds(2, 3, a);
    const BoundEntry* g2 = find_entry(rep, "gwozdziewicz");
    REQUIRE(g2);
    CHECK(g2->value == Rational(4, 5));
    const BoundEntry* dk = find_entry(rep, "dacunto_kurdyka");
    REQUIRE(dk);
    CHECK(dk->value == Rational(17, 18));
    CHECK(rep.best() == g2);
}

TEST_CASE("rho bounds: partial-y hypothesis") {
    Assumptions a;
    a.partial_y_nonzero = true;
    auto rep = rho_bounds(2, 2, a);
    const BoundEntry* t21 = find_entry(rep, "theorem_2_1");
    REQUIRE(t21);
    CHECK(t21->denominator == 33);
    CHECK(t21->value == Rational(1) - Rational(1, 33));
    const BoundEntry* t22 = find_entry(rep, "theorem_2_2");
    REQUIRE(t22);
    CHECK(t22->denominator == 4374);
    CHECK(rep.best() == t21);
}

TEST_CASE("rho bounds: linear case") {
    Assumptions a;
    auto rep = rho_bounds(5, 1, a);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].value == 0);
    CHECK(rep.entries[0].best);
}

TEST_CASE("rho bound invariants") {
    Assumptions all;
    all.partial_y_nonzero = all.polynomial_f = all.isolated_zero = true;
    for (int n = 1; n <= 6; ++n)
        for (int d = 2; d <= 8; ++d) {
            auto rep = rho_bounds(n, d, all);
            for (const auto& e : rep.entries) {
                CHECK(e.value >= 0);
                CHECK(e.value < 1);
                // 1/(1 - value) is exactly the stored integer denominator.
                CHECK(Rational(1) / (Rational(1) - e.value) == Rational(e.denominator));
            }
        }
}

TEST_CASE("sufficiency degrees") {
    Assumptions nash_only;
    auto rep = sufficiency_degrees(2, 2, nash_only);
    CHECK(rep.best()->denominator == 4374);
    CHECK(rep.best()->source == "Theorem 1.3");

    Assumptions py;
    py.partial_y_nonzero = true;
    auto rep2 = sufficiency_degrees(2, 2, py);
    CHECK(rep2.best()->denominator == 33);
    CHECK(rep2.best()->source == "Theorem 1.4");

    Assumptions poly;
    poly.polynomial_f = true;
    auto rep3 = sufficiency_degrees(2, 3, poly);
    CHECK(rep3.best()->denominator == 18);
    poly.isolated_zero = true;
    auto rep4 = sufficiency_degrees(2, 3, poly);
    CHECK(rep4.best()->denominator == 5);
}

TEST_CASE("distance exponents") {
    Assumptions a;
    auto rep = dist_exponents(2, 2, a);
    const BoundEntry* v = find_entry(rep, "value_exponent");
    const BoundEntry* g = find_entry(rep, "gradient_exponent");
    REQUIRE(v);
    REQUIRE(g);
    CHECK(v->value == 4374);
    CHECK(g->value == 4373);

    a.partial_y_nonzero = true;
    auto rep2 = dist_exponents(2, 2, a);
    const BoundEntry* vr = find_entry(rep2, "value_exponent_partial_y");
    const BoundEntry* gr = find_entry(rep2, "gradient_exponent_partial_y");
    REQUIRE(vr);
    REQUIRE(gr);
    CHECK(vr->value == 33);
    CHECK(gr->value == 32);
    CHECK_FALSE(vr->note.empty());

    auto rep3 = dist_exponents(2, 2, a, Rational(1, 2));
    const BoundEntry* lx = find_entry(rep3, "loj_exponent_from_rho");
    REQUIRE(lx);
    CHECK(lx->value == 2);
    CHECK_THROWS_AS(dist_exponents(2, 2, a, Rational(3, 2)), std::domain_error);
}

TEST_CASE("prior bound comparison") {
    auto c = prior_bound_comparison(4, 2);
    CHECK(c.current == 3188646);
    CHECK(c.prior == 2 * slow_pow(9, 13));
    CHECK(c.sharper);

    auto c1 = prior_bound_comparison(1, 2);
    CHECK(c1.current == 162);
    CHECK(c1.prior == 18);
    CHECK_FALSE(c1.sharper);

    CHECK(prior_bound_comparison(5, 3).sharper);
    for (int d = 2; d <= 6; ++d)
        for (int n = 4; n <= 8; ++n) CHECK(prior_bound_comparison(n, d).sharper);
}

TEST_CASE("total degree product") {
    std::vector<int> case_ii{2, 2, 3};
    CHECK(total_degree_product(case_ii) == 12);
    std::vector<int> one{1};
    CHECK(total_degree_product(one) == 1);
    std::vector<int> mixed{3, 5, 2};
    CHECK(total_degree_product(mixed) == 30);
    std::vector<int> empty;
    CHECK_THROWS_AS(total_degree_product(empty), std::domain_error);
    std::vector<int> bad{2, 0};
    CHECK_THROWS_AS(total_degree_product(bad), std::domain_error);
}
