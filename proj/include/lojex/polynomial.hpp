#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lojex {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Exponent vector of a monomial; length always equals the owning
/// polynomial's variable count.
using ExponentVec = std::vector<uint32_t>;

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    size_t position;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are keyed by exponent vector under lexicographic order (variable 0
/// most significant). Stored coefficients are never zero. The zero polynomial
/// has an empty term map and reports its total degree as "absent" rather
/// than 0, so degree formulas cannot silently consume it.
class Polynomial {
  public:
    using TermMap = std::map<ExponentVec, Rational>;

    Polynomial() : nvars_(0) {}
    explicit Polynomial(int nvars);

    static Polynomial zero(int nvars) { return Polynomial(nvars); }
    static Polynomial constant(int nvars, const Rational& c);
    static Polynomial variable(int nvars, int index);
    static Polynomial monomial(int nvars, ExponentVec exps, const Rational& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Total degree; std::nullopt for the zero polynomial.
    std::optional<int> total_degree() const;
    /// Largest exponent of `var` over all terms; -1 for the zero polynomial.
    int degree_in(int var) const;
    bool depends_on(int var) const;
    Rational coefficient(const ExponentVec& exps) const;
    /// Constant term (coefficient of the all-zero exponent vector).
    Rational constant_term() const;
    /// Leading coefficient in the lexicographic term order.
    const Rational& leading_coefficient() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
    bool operator==(const Polynomial& rhs) const {
        return nvars_ == rhs.nvars_ && terms_ == rhs.terms_;
    }

    Polynomial pow(unsigned exponent) const;
    Polynomial scaled(const Rational& c) const;

    /// Formal partial derivative with respect to variable `var`.
    Polynomial partial(int var) const;

    Rational eval_exact(std::span<const Rational> point) const;
    double eval_double(std::span<const double> point) const;
    /// Sum of |coefficient| * prod |x_i|^e_i; an upper bound on the
    /// floating-point cancellation scale of eval_double at `point`.
    double magnitude_at(std::span<const double> point) const;

    /// Coefficients with respect to `var`: result[k] is the coefficient of
    /// var^k, a polynomial in the same variable space with var-exponent 0.
    std::vector<Polynomial> coefficients_in(int var) const;

    /// Exact division; throws std::domain_error when `divisor` does not
    /// divide this polynomial.
    Polynomial exact_divide(const Polynomial& divisor) const;

    /// Canonical associate: integer coprime coefficients with positive
    /// leading coefficient. Zero maps to zero.
    Polynomial canonical() const;

    /// Re-index variables: exponent of old variable i moves to index_map[i].
    /// index_map[i] == -1 is allowed only when the polynomial does not
    /// depend on variable i.
    Polynomial remap(std::span<const int> index_map, int new_nvars) const;

  private:
    void insert_term(const ExponentVec& exps, const Rational& c);

    int nvars_;
    TermMap terms_;
};

/// Parse the polynomial text grammar: terms `c * v1^e1 * ...` joined by
/// `+`/`-`, integer or `p/q` rational literals, `^` powers with non-negative
/// integer exponents, and parentheses (expanded). Every identifier must
/// appear in `var_names`.
Polynomial parse_polynomial(std::string_view text, std::span<const std::string> var_names);

/// Inverse of parse_polynomial: parse(render(p)) == p.
std::string render_polynomial(const Polynomial& p, std::span<const std::string> var_names);

/// GCD in Q[x1..xn], canonical (integer-primitive, positive leading
/// coefficient). gcd(0,0) = 0.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

/// Content of p viewed as a univariate polynomial in `var` with polynomial
/// coefficients: the gcd of those coefficients.
Polynomial content_in(const Polynomial& p, int var);

/// Largest factor of p depending only on `var` (gcd of the univariate
/// coefficient groups when all other variables are treated as the carrier).
Polynomial univariate_content(const Polynomial& p, int var);

/// Product of the distinct irreducible factors of p (each to multiplicity 1).
Polynomial squarefree_part(const Polynomial& p);

/// Yun-style decomposition p = unit * prod f_k^{m_k} with each f_k
/// square-free; pairs are (f_k, m_k). Content in variables other than the
/// main one is decomposed recursively.
std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& p);

/// Determinant of the Sylvester matrix of p and q with respect to
/// `elim_var`. Both inputs must have positive degree in that variable.
Polynomial resultant(const Polynomial& p, const Polynomial& q, int elim_var);

}  // namespace lojex
