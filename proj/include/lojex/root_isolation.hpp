#pragma once

#include "lojex/polynomial.hpp"

#include <vector>

namespace lojex {

/// Closed interval with exact rational endpoints; lo == hi marks an exact
/// root hit during bisection.
struct RootInterval {
    Rational lo;
    Rational hi;
    double midpoint() const { return Rational((lo + hi) / 2).get_d(); }
};

/// Isolate every real root of a univariate polynomial inside [lo, hi].
///
/// Sign-based (Sturm chain with exact rational arithmetic), so no root is
/// missed and multiple roots are still isolated (as distinct roots). Each
/// returned interval has width <= tol, contains exactly one distinct real
/// root, and the intervals are pairwise disjoint. Throws std::domain_error
/// for the zero polynomial or a polynomial in more than one variable.
std::vector<RootInterval> isolate_real_roots(const Polynomial& p, const Rational& lo,
                                             const Rational& hi, const Rational& tol);

}  // namespace lojex
