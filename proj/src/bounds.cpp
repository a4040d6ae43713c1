#include "lojex/bounds.hpp"

#include <algorithm>

namespace lojex {

namespace {

BigInt ipow(long base, unsigned long exp) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exp);
    return r;
}

void check_domain(int n, int d, int min_d) {
    if (n < 1) throw std::domain_error("dimension n must be >= 1");
    if (d < min_d) throw std::domain_error("degree d out of range");
}

Rational rho_from_denominator(const BigInt& den) {
    return Rational(1) - Rational(1, den);
}

void mark_best_min(BoundReport& report) {
    if (report.entries.empty()) return;
    size_t best = 0;
    for (size_t i = 1; i < report.entries.size(); ++i)
        if (report.entries[i].value < report.entries[best].value) best = i;
    report.entries[best].best = true;
}

}  // namespace

const BoundEntry* BoundReport::best() const {
    for (const auto& e : entries)
        if (e.best) return &e;
    return nullptr;
}

BigInt r_bound(int n, int d) {
    check_domain(n, d, 2);
    BigInt a = BigInt(2 * d) * BigInt(2 * d - 1);
    BigInt b = BigInt(d) * ipow(3 * d - 2, static_cast<unsigned long>(n));
    return std::max(a, b) + 1;
}

BigInt s_bound(int n, int d) {
    check_domain(n, d, 1);
    return 2 * ipow(2 * d - 1, static_cast<unsigned long>(3 * n + 1));
}

BoundReport rho_bounds(int n, int d, const Assumptions& a) {
    check_domain(n, d, 1);
    BoundReport report{n, d, a, {}};
    if (d == 1) {
        report.entries.push_back({"linear", BoundKind::rho_bound, Rational(0), BigInt(1),
                                  "linear function", "degree 1: the inequality holds with rho = 0",
                                  true});
        return report;
    }
    report.entries.push_back({"theorem_2_2", BoundKind::rho_bound,
                              rho_from_denominator(s_bound(n, d)), s_bound(n, d), "Theorem 2.2",
                              "", false});
    if (a.partial_y_nonzero) {
        report.entries.push_back({"theorem_2_1", BoundKind::rho_bound,
                                  rho_from_denominator(r_bound(n, d)), r_bound(n, d),
                                  "Theorem 2.1", "", false});
    }
    if (a.polynomial_f || a.rational_f) {
        BigInt den = BigInt(d) * ipow(3 * d - 3, static_cast<unsigned long>(n - 1));
        report.entries.push_back({"dacunto_kurdyka", BoundKind::rho_bound,
                                  rho_from_denominator(den), den, "D'Acunto-Kurdyka bound", "",
                                  false});
        if (a.isolated_zero) {
            BigInt gden = ipow(d - 1, static_cast<unsigned long>(n)) + 1;
            report.entries.push_back({"gwozdziewicz", BoundKind::rho_bound,
                                      rho_from_denominator(gden), gden, "Gwozdziewicz bound", "",
                                      false});
        }
    }
    mark_best_min(report);
    return report;
}

BoundReport sufficiency_degrees(int n, int d, const Assumptions& a) {
    check_domain(n, d, 1);
    BoundReport report{n, d, a, {}};
    if (d == 1) {
        report.entries.push_back({"linear", BoundKind::sufficiency_degree, Rational(1), BigInt(1),
                                  "linear function", "degree 1: k = 1", true});
        return report;
    }
    report.entries.push_back({"theorem_1_3", BoundKind::sufficiency_degree,
                              Rational(s_bound(n, d)), s_bound(n, d), "Theorem 1.3", "", false});
    if (a.partial_y_nonzero) {
        BigInt k = BigInt(d) * ipow(3 * d - 2, static_cast<unsigned long>(n)) + 1;
        report.entries.push_back(
            {"theorem_1_4", BoundKind::sufficiency_degree, Rational(k), k, "Theorem 1.4", "", false});
    }
    if (a.polynomial_f || a.rational_f) {
        BigInt k = BigInt(d) * ipow(3 * d - 3, static_cast<unsigned long>(n - 1));
        report.entries.push_back({"remark_1_5_polynomial", BoundKind::sufficiency_degree,
                                  Rational(k), k, "Remark 1.5", "", false});
        if (a.isolated_zero) {
            BigInt ki = ipow(d - 1, static_cast<unsigned long>(n)) + 1;
            report.entries.push_back({"remark_1_5_isolated", BoundKind::sufficiency_degree,
                                      Rational(ki), ki, "Remark 1.5", "", false});
        }
    }
    mark_best_min(report);
    return report;
}

BoundReport dist_exponents(int n, int d, const Assumptions& a,
                           const std::optional<Rational>& user_rho) {
    check_domain(n, d, 1);
    BoundReport report{n, d, a, {}};
    BigInt s = s_bound(n, d);
    report.entries.push_back({"value_exponent", BoundKind::dist_exponent, Rational(s), s,
                              "Corollary 3.6", "exponent for |f| >= C dist^e", false});
    report.entries.push_back({"gradient_exponent", BoundKind::dist_exponent, Rational(s - 1),
                              s - 1, "Corollary 3.6", "exponent for |grad f| >= C dist^e", false});
    report.entries.push_back({"loj_exponent", BoundKind::loj_exponent, Rational(s), s,
                              "Corollary 3.8", "upper bound for the Lojasiewicz exponent on X",
                              false});
    if (a.partial_y_nonzero && d >= 2) {
        BigInt r = r_bound(n, d);
        report.entries.push_back(
            {"value_exponent_partial_y", BoundKind::dist_exponent, Rational(r), r,
             "Corollary 3.6",
             "derived as 1/(1-rho) with rho = 1 - 1/R(n,d); a differing printed form "
             "d(3d-2)^(n+1) exists for this case",
             false});
        report.entries.push_back(
            {"gradient_exponent_partial_y", BoundKind::dist_exponent, Rational(r - 1), r - 1,
             "Corollary 3.6",
             "derived as rho/(1-rho); the printed gradient exponent reads e/(1-rho)", false});
    }
    if (user_rho) {
        if (*user_rho < 0 || *user_rho >= 1)
            throw std::domain_error("user rho must lie in [0, 1)");
        Rational lx = Rational(1) / (Rational(1) - *user_rho);
        report.entries.push_back({"loj_exponent_from_rho", BoundKind::loj_exponent, lx, BigInt(0),
                                  "Corollary 3.7", "1/(1 - rho) for the supplied rho", false});
    }
    return report;
}

PriorComparison prior_bound_comparison(int n, int d) {
    check_domain(n, d, 1);
    BigInt current = s_bound(n, d);
    unsigned long prior_exp =
        static_cast<unsigned long>(n + (n * (n + 1)) / 2 - 1);
    BigInt prior = BigInt(d) * ipow(6 * d - 3, prior_exp);
    return {current, prior, current < prior};
}

BigInt total_degree_product(std::span<const int> degrees) {
    if (degrees.empty()) throw std::domain_error("empty degree list");
    BigInt product(1);
    for (int d : degrees) {
        if (d < 1) throw std::domain_error("degrees must be >= 1");
        product *= d;
    }
    return product;
}

}  // namespace lojex
