#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lojex/polynomial.hpp"

#include <random>

using namespace lojex;

namespace {

const std::vector<std::string> kXY{"x1", "x2", "y"};

Polynomial parse3(const std::string& text) { return parse_polynomial(text, kXY); }

Polynomial random_poly(std::mt19937& rng, int nvars, int max_terms, int max_deg, int coeff_span) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> coeff(-coeff_span, coeff_span);
    Polynomial p(nvars);
    int terms = nterms(rng);
    for (int t = 0; t < terms; ++t) {
        ExponentVec e(nvars);
        for (int i = 0; i < nvars; ++i) e[i] = static_cast<uint32_t>(deg(rng));
        int c = coeff(rng);
        if (c != 0) p += Polynomial::monomial(nvars, e, Rational(c));
    }
    return p;
}

// Test-local Laplace expansion; the independent oracle for resultants.
Polynomial naive_determinant(const std::vector<std::vector<Polynomial>>& m, int nvars) {
    const size_t k = m.size();
    if (k == 1) return m[0][0];
    Polynomial det(nvars);
    for (size_t col = 0; col < k; ++col) {
        if (m[0][col].is_zero()) continue;
        std::vector<std::vector<Polynomial>> minor;
        for (size_t r = 1; r < k; ++r) {
            std::vector<Polynomial> row;
            for (size_t c = 0; c < k; ++c)
                if (c != col) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        Polynomial term = m[0][col] * naive_determinant(minor, nvars);
        if (col % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}

Polynomial sylvester_determinant(const Polynomial& p, const Polynomial& q, int var) {
    int dp = p.degree_in(var), dq = q.degree_in(var);
    auto pc = p.coefficients_in(var);
    auto qc = q.coefficients_in(var);
    int n = dp + dq;
    std::vector<std::vector<Polynomial>> m(n, std::vector<Polynomial>(n, Polynomial(p.nvars())));
    for (int row = 0; row < dq; ++row)
        for (int j = 0; j <= dp; ++j) m[row][row + j] = pc[dp - j];
    for (int row = 0; row < dp; ++row)
        for (int j = 0; j <= dq; ++j) m[dq + row][row + j] = qc[dq - j];
    return naive_determinant(m, p.nvars());
}

}  // namespace

TEST_CASE("parse reads terms directly") {
    Polynomial p = parse3("y - x1^2 - x2^2");
    CHECK(p.term_count() == 3);
    CHECK(p.total_degree().value() == 2);
    CHECK(p.coefficient({0, 0, 1}) == 1);
    CHECK(p.coefficient({2, 0, 0}) == -1);
    CHECK(p.coefficient({0, 2, 0}) == -1);
}

TEST_CASE("parse zero") {
    std::vector<std::string> names{"x1"};
    Polynomial p = parse_polynomial("0", names);
    CHECK(p.is_zero());
    CHECK_FALSE(p.total_degree().has_value());
}

TEST_CASE("parse expands parentheses") {
    // Hand expansion: (y+1)^2 - 1 - x1^2 - x2^2 = y^2 + 2y - x1^2 - x2^2.
    Polynomial p = parse3("(y+1)^2 - 1 - x1^2 - x2^2");
    Polynomial expected = parse3("y^2 + 2*y - x1^2 - x2^2");
    CHECK(p == expected);
}

TEST_CASE("parse rational literals and rejects unknowns") {
    std::vector<std::string> names{"x1"};
    Polynomial p = parse_polynomial("3/4 * x1 - 1/2", names);
    CHECK(p.coefficient({1}) == Rational(3, 4));
    CHECK(p.coefficient({0}) == Rational(-1, 2));
    CHECK_THROWS_AS(parse_polynomial("x2 + 1", names), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1 + ", names), ParseError);
    CHECK_THROWS_AS(parse_polynomial("x1 ^ -2", names), ParseError);
}

TEST_CASE("render round-trips") {
    std::mt19937 rng(7);
    for (int t = 0; t < 50; ++t) {
        Polynomial p = random_poly(rng, 3, 6, 4, 9);
        std::string text = render_polynomial(p, kXY);
        CHECK(parse_polynomial(text, kXY) == p);
    }
    CHECK(render_polynomial(Polynomial::zero(3), kXY) == "0");
}

TEST_CASE("arithmetic basics") {
    Polynomial p = parse3("y - x1^2 - x2^2");
    CHECK((p - p).is_zero());
    CHECK((p + (-p)).is_zero());
    Polynomial x1 = Polynomial::variable(3, 0);
    CHECK(x1 * x1 == parse3("x1^2"));
    CHECK(parse3("(y+1)^2") == parse3("y^2 + 2*y + 1"));
    CHECK(parse3("y+1").pow(2) == parse3("y^2 + 2*y + 1"));
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937 rng(11);
    for (int t = 0; t < 30; ++t) {
        Polynomial a = random_poly(rng, 2, 4, 3, 5);
        Polynomial b = random_poly(rng, 2, 4, 3, 5);
        Polynomial c = random_poly(rng, 2, 4, 3, 5);
        CHECK(a * b == b * a);
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("partial derivatives") {
    CHECK(parse3("y - x1^2 - x2^2").partial(0) == parse3("-2*x1"));
    CHECK(parse3("5").partial(1).is_zero());
    CHECK(parse3("x1^3*x2").partial(1) == parse3("x1^3"));
}

TEST_CASE("differentiation is linear and satisfies the product rule") {
    std::mt19937 rng(13);
    for (int t = 0; t < 30; ++t) {
        Polynomial a = random_poly(rng, 2, 4, 3, 5);
        Polynomial b = random_poly(rng, 2, 4, 3, 5);
        for (int v = 0; v < 2; ++v) {
            CHECK((a + b).partial(v) == a.partial(v) + b.partial(v));
            CHECK((a * b).partial(v) == a.partial(v) * b + a * b.partial(v));
        }
    }
}

TEST_CASE("evaluation") {
    Polynomial p = parse3("y - x1^2 - x2^2");
    std::vector<Rational> pt{Rational(1), Rational(1), Rational(2)};
    CHECK(p.eval_exact(pt) == 0);
    CHECK(Polynomial::zero(3).eval_exact(pt) == 0);
    Polynomial q = parse3("x1^2*x2^2");
    std::vector<Rational> pt2{Rational(2), Rational(3), Rational(0)};
    CHECK(q.eval_exact(pt2) == 36);
    std::vector<double> ptd{2.0, 3.0, 0.0};
    CHECK(q.eval_double(ptd) == doctest::Approx(36.0));
}

TEST_CASE("exact division and canonical form") {
    Polynomial a = parse3("(x1 + x2)^2 * (x1 - x2)");
    Polynomial b = parse3("x1 + x2");
    CHECK(a.exact_divide(b) == parse3("(x1 + x2) * (x1 - x2)"));
    CHECK_THROWS_AS(a.exact_divide(parse3("x1 + y")), std::domain_error);
    Polynomial c = parse3("2/3 * x1 - 4/3 * x2");
    Polynomial canon = c.canonical();
    CHECK(canon == parse3("x1 - 2*x2"));
}

TEST_CASE("resultant matches the naive Sylvester determinant") {
    std::vector<std::string> names{"x", "y", "u"};
    Polynomial p = parse_polynomial("y - x^2", names);
    Polynomial q = parse_polynomial("u - 4*x^2", names);
    Polynomial r = resultant(p, q, 0);
    CHECK(r == sylvester_determinant(p, q, 0));
    // Root locus u = 4y up to a nonzero constant: square-free canonical form.
    CHECK(squarefree_part(r) == parse_polynomial("u - 4*y", names).canonical());

    std::mt19937 rng(17);
    for (int t = 0; t < 15; ++t) {
        Polynomial a = random_poly(rng, 2, 4, 3, 4);
        Polynomial b = random_poly(rng, 2, 4, 3, 4);
        if (a.degree_in(0) < 1 || b.degree_in(0) < 1) continue;
        CHECK(resultant(a, b, 0) == sylvester_determinant(a, b, 0));
    }
}

TEST_CASE("resultant linear and degenerate cases") {
    std::vector<std::string> names{"x", "a", "b"};
    Polynomial r = resultant(parse_polynomial("x - a", names), parse_polynomial("x - b", names), 0);
    bool matches = r == parse_polynomial("a - b", names) || r == parse_polynomial("b - a", names);
    CHECK(matches);
    Polynomial p = parse_polynomial("x^2 - a", names);
    CHECK(resultant(p, p, 0).is_zero());
    CHECK_THROWS_AS(resultant(p, parse_polynomial("a + b", names), 0), std::domain_error);
}

TEST_CASE("resultant vanishes at projections of common roots") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> num(-4, 4);
    for (int t = 0; t < 20; ++t) {
        Polynomial p = random_poly(rng, 2, 5, 3, 4);
        Polynomial q = random_poly(rng, 2, 5, 3, 4);
        std::vector<Rational> zeta{Rational(num(rng)), Rational(num(rng), 3)};
        zeta[1].canonicalize();
        Polynomial ps = p - Polynomial::constant(2, p.eval_exact(zeta));
        Polynomial qs = q - Polynomial::constant(2, q.eval_exact(zeta));
        if (ps.degree_in(0) < 1 || qs.degree_in(0) < 1) continue;
        Polynomial r = resultant(ps, qs, 0);
        if (r.is_zero()) continue;
        std::vector<Rational> proj{Rational(0), zeta[1]};
        CHECK(r.eval_exact(proj) == 0);
    }
}

TEST_CASE("gcd and square-free machinery") {
    Polynomial a = parse3("(x1 + x2)^2 * (x1 - x2)");
    Polynomial b = parse3("(x1 + x2) * (x1 - x2)^2");
    CHECK(poly_gcd(a, b) == parse3("(x1 + x2) * (x1 - x2)").canonical());
    CHECK(poly_gcd(a, Polynomial::zero(3)) == a.canonical());

    Polynomial sq = parse3("(y - 4*x1)^2");
    CHECK(squarefree_part(sq) == parse3("y - 4*x1").canonical());

    Polynomial p = parse3("(x1 + x2 + 1)^2 * (x1 - x2)^3");
    auto decomp = squarefree_decomposition(p);
    REQUIRE(decomp.size() == 2);
    bool found_a = false, found_b = false;
    for (const auto& [f, m] : decomp) {
        if (f == parse3("x1 + x2 + 1").canonical()) {
            CHECK(m == 2);
            found_a = true;
        }
        if (f == parse3("x1 - x2").canonical()) {
            CHECK(m == 3);
            found_b = true;
        }
    }
    CHECK(found_a);
    CHECK(found_b);
}

TEST_CASE("univariate content extraction") {
    std::vector<std::string> names{"u", "y"};
    Polynomial p = parse_polynomial("y*u^2 - 64*y^4", names);
    CHECK(univariate_content(p, 1) == parse_polynomial("y", names));
    CHECK(p.exact_divide(univariate_content(p, 1)) == parse_polynomial("u^2 - 64*y^3", names));
}

TEST_CASE("variable remapping") {
    Polynomial p = parse3("y - x1^2");
    std::vector<int> map{2, -1, 0};  // x1 -> index 2, y -> index 0
    Polynomial q = p.remap(map, 3);
    CHECK(q.coefficient({1, 0, 0}) == 1);
    CHECK(q.coefficient({0, 0, 2}) == -1);
    std::vector<int> bad{-1, -1, 0};
    CHECK_THROWS_AS(p.remap(bad, 1), std::domain_error);
}

TEST_CASE("zero polynomial degree is distinguished") {
    Polynomial z = Polynomial::zero(2);
    CHECK_FALSE(z.total_degree().has_value());
    CHECK(z.degree_in(0) == -1);
    CHECK(Polynomial::constant(2, Rational(5)).total_degree().value() == 0);
}
