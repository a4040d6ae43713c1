#pragma once

#include "lojex/polynomial.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lojex {

/// Hypothesis flags under which the various bounds apply. Callers assert
/// them; this module never verifies them against a concrete function.
struct Assumptions {
    bool partial_y_nonzero = false;
    bool polynomial_f = false;
    bool rational_f = false;
    bool isolated_zero = false;
};

enum class BoundKind { rho_bound, dist_exponent, sufficiency_degree, loj_exponent, total_degree };

struct BoundEntry {
    std::string name;
    BoundKind kind;
    Rational value;
    /// For rho bounds: value == 1 - 1/denominator with denominator >= 1
    /// (denominator 1 encodes rho = 0, the linear case).
    BigInt denominator;
    std::string source;
    std::string note;
    bool best = false;
};

struct BoundReport {
    int n = 0;
    int d = 0;
    Assumptions assumptions;
    std::vector<BoundEntry> entries;

    const BoundEntry* best() const;
};

/// max{2d(2d-1), d(3d-2)^n} + 1. Requires n >= 1 and d >= 2 (d = 1 is the
/// linear case, handled by the report builders as rho = 0 / k = 1).
BigInt r_bound(int n, int d);

/// 2(2d-1)^(3n+1). Requires n >= 1, d >= 1.
BigInt s_bound(int n, int d);

/// Exponent bounds for the gradient inequality |grad f| >= C |f|^rho.
/// Always emits the general Nash bound; sharper entries appear as the
/// assumption flags allow. The minimum is marked best.
BoundReport rho_bounds(int n, int d, const Assumptions& a);

/// Jet sufficiency degrees k; the smallest applicable entry is marked best.
BoundReport sufficiency_degrees(int n, int d, const Assumptions& a);

/// Distance exponents for |f| and |grad f| against dist(x, f^{-1}(0)), plus
/// the Lojasiewicz exponent bounds; user_rho, when given, adds the
/// 1/(1-rho) entry.
BoundReport dist_exponents(int n, int d, const Assumptions& a,
                           const std::optional<Rational>& user_rho = std::nullopt);

struct PriorComparison {
    BigInt current;  // 2(2d-1)^(3n+1)
    BigInt prior;    // d(6d-3)^(n + n(n+1)/2 - 1)
    bool sharper;    // current < prior
};
PriorComparison prior_bound_comparison(int n, int d);

/// Exact product of total degrees; the generic degree budget for an
/// intersection of hypersurfaces. Requires a nonempty list of degrees >= 1.
BigInt total_degree_product(std::span<const int> degrees);

}  // namespace lojex
