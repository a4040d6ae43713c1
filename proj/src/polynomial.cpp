#include "lojex/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace lojex {

namespace {

int vec_degree(const ExponentVec& e) {
    int d = 0;
    for (uint32_t k : e) d += static_cast<int>(k);
    return d;
}

}  // namespace

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("negative variable count");
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_.emplace(ExponentVec(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::out_of_range("variable index");
    ExponentVec e(nvars, 0);
    e[index] = 1;
    Polynomial p(nvars);
    p.terms_.emplace(std::move(e), Rational(1));
    return p;
}

Polynomial Polynomial::monomial(int nvars, ExponentVec exps, const Rational& c) {
    if (static_cast<int>(exps.size()) != nvars) throw std::invalid_argument("exponent vector length");
    Polynomial p(nvars);
    if (c != 0) p.terms_.emplace(std::move(exps), c);
    return p;
}

bool Polynomial::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && vec_degree(terms_.begin()->first) == 0;
}

std::optional<int> Polynomial::total_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, vec_degree(e));
    return d;
}

int Polynomial::degree_in(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("variable index");
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
    return d;
}

bool Polynomial::depends_on(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("variable index");
    for (const auto& [e, c] : terms_)
        if (e[var] > 0) return true;
    return false;
}

Rational Polynomial::coefficient(const ExponentVec& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(ExponentVec(nvars_, 0)); }

const Rational& Polynomial::leading_coefficient() const {
    if (terms_.empty()) throw std::domain_error("zero polynomial has no leading coefficient");
    return terms_.rbegin()->second;
}

void Polynomial::insert_term(const ExponentVec& exps, const Rational& c) {
    auto [it, inserted] = terms_.try_emplace(exps, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (nvars_ != rhs.nvars_) throw std::invalid_argument("mismatched variable counts");
    for (const auto& [e, c] : rhs.terms_) insert_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (nvars_ != rhs.nvars_) throw std::invalid_argument("mismatched variable counts");
    for (const auto& [e, c] : rhs.terms_) insert_term(e, -c);
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    if (lhs.nvars_ != rhs.nvars_) throw std::invalid_argument("mismatched variable counts");
    Polynomial r(lhs.nvars_);
    ExponentVec e(lhs.nvars_);
    for (const auto& [ea, ca] : lhs.terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            for (int i = 0; i < lhs.nvars_; ++i) e[i] = ea[i] + eb[i];
            r.insert_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result = Polynomial::constant(nvars_, 1);
    Polynomial base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        exponent >>= 1u;
        if (exponent > 0) base = base * base;
    }
    return result;
}

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Polynomial Polynomial::partial(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("variable index");
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        ExponentVec de = e;
        de[var] -= 1;
        r.insert_term(de, c * Rational(e[var]));
    }
    return r;
}

Rational Polynomial::eval_exact(std::span<const Rational> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("point dimension");
    Rational acc(0);
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (int i = 0; i < nvars_; ++i) {
            for (uint32_t k = 0; k < e[i]; ++k) term *= point[i];
        }
        acc += term;
    }
    return acc;
}

double Polynomial::eval_double(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("point dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            term *= std::pow(point[i], static_cast<int>(e[i]));
        }
        acc += term;
    }
    return acc;
}

double Polynomial::magnitude_at(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("point dimension");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = std::abs(c.get_d());
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            term *= std::pow(std::abs(point[i]), static_cast<int>(e[i]));
        }
        acc += term;
    }
    return acc;
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
    int d = degree_in(var);
    std::vector<Polynomial> out(static_cast<size_t>(std::max(d, -1) + 1), Polynomial(nvars_));
    for (const auto& [e, c] : terms_) {
        ExponentVec reduced = e;
        uint32_t k = reduced[var];
        reduced[var] = 0;
        out[k].insert_term(reduced, c);
    }
    return out;
}

Polynomial Polynomial::exact_divide(const Polynomial& divisor) const {
    if (nvars_ != divisor.nvars_) throw std::invalid_argument("mismatched variable counts");
    if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
    Polynomial rem = *this;
    Polynomial quot(nvars_);
    const auto& dlead = *divisor.terms_.rbegin();
    while (!rem.terms_.empty()) {
        const auto& rlead = *rem.terms_.rbegin();
        ExponentVec qe(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            if (rlead.first[i] < dlead.first[i]) throw std::domain_error("not divisible");
            qe[i] = rlead.first[i] - dlead.first[i];
        }
        Rational qc = rlead.second / dlead.second;
        Polynomial qterm = Polynomial::monomial(nvars_, qe, qc);
        quot += qterm;
        rem -= qterm * divisor;
    }
    return quot;
}

Polynomial Polynomial::canonical() const {
    if (terms_.empty()) return *this;
    BigInt den_lcm(1), num_gcd(0);
    for (const auto& [e, c] : terms_) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (terms_.rbegin()->second < 0) scale = -scale;
    return scaled(scale);
}

Polynomial Polynomial::remap(std::span<const int> index_map, int new_nvars) const {
    if (static_cast<int>(index_map.size()) != nvars_) throw std::invalid_argument("index map length");
    Polynomial r(new_nvars);
    for (const auto& [e, c] : terms_) {
        ExponentVec ne(new_nvars, 0);
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (index_map[i] < 0 || index_map[i] >= new_nvars)
                throw std::domain_error("remap drops a used variable");
            ne[index_map[i]] += e[i];
        }
        r.insert_term(ne, c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Parsing / rendering
// ---------------------------------------------------------------------------

namespace {

struct Parser {
    std::string_view text;
    size_t pos = 0;
    std::span<const std::string> names;
    int nvars;

    explicit Parser(std::string_view t, std::span<const std::string> n)
        : text(t), names(n), nvars(static_cast<int>(n.size())) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    Polynomial parse_expression() {
        Polynomial acc(nvars);
        bool negate = false;
        if (consume('-')) negate = true;
        else consume('+');
        Polynomial first = parse_term();
        acc = negate ? -first : first;
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos;
                acc += parse_term();
            } else if (c == '-') {
                ++pos;
                acc -= parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    Polynomial parse_term() {
        Polynomial acc = parse_factor();
        while (consume('*')) acc = acc * parse_factor();
        return acc;
    }

    Polynomial parse_factor() {
        Polynomial base = parse_primary();
        while (consume('^')) {
            skip_ws();
            size_t at = pos;
            unsigned long e = parse_uint("exponent");
            if (e > 64u * 1024u) throw ParseError("exponent too large", at);
            base = base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    Polynomial parse_primary() {
        char c = peek();
        if (c == '(') {
            ++pos;
            Polynomial inner = parse_expression();
            if (!consume(')')) throw ParseError("expected ')'", pos);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_variable();
        throw ParseError("expected number, variable, or '('", pos);
    }

    unsigned long parse_uint(const char* what) {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw ParseError(std::string("expected ") + what, start);
        return std::stoul(std::string(text.substr(start, pos - start)));
    }

    Polynomial parse_number() {
        size_t start = pos;
        std::string digits;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            digits += text[pos++];
        Rational value(BigInt(digits, 10));
        if (pos < text.size() && text[pos] == '/') {
            ++pos;
            size_t dstart = pos;
            std::string den;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                den += text[pos++];
            if (den.empty()) throw ParseError("expected denominator", dstart);
            BigInt d(den, 10);
            if (d == 0) throw ParseError("zero denominator", dstart);
            value /= Rational(d);
        } else if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::string frac;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                frac += text[pos++];
            if (frac.empty()) throw ParseError("expected digits after '.'", pos);
            BigInt scale(1);
            for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
            value = Rational(BigInt(digits + frac, 10), scale);
            value.canonicalize();
        }
        (void)start;
        return Polynomial::constant(nvars, value);
    }

    Polynomial parse_variable() {
        size_t start = pos;
        std::string name;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            name += text[pos++];
        for (int i = 0; i < nvars; ++i) {
            if (names[i] == name) return Polynomial::variable(nvars, i);
        }
        throw ParseError("unknown variable '" + name + "'", start);
    }
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::span<const std::string> var_names) {
    Parser parser(text, var_names);
    if (parser.peek() == '\0') throw ParseError("empty input", 0);
    Polynomial p = parser.parse_expression();
    if (parser.peek() != '\0') throw ParseError("unexpected trailing input", parser.pos);
    return p;
}

std::string render_polynomial(const Polynomial& p, std::span<const std::string> var_names) {
    if (static_cast<int>(var_names.size()) != p.nvars())
        throw std::invalid_argument("variable name count");
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
            first = false;
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        bool has_vars = false;
        std::ostringstream vars;
        bool first_var = true;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!first_var) vars << "*";
            first_var = false;
            has_vars = true;
            vars << var_names[i];
            if (e[i] > 1) vars << "^" << e[i];
        }
        if (!has_vars) {
            out << a.get_str();
        } else if (a == 1) {
            out << vars.str();
        } else {
            out << a.get_str() << "*" << vars.str();
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// GCD, square-free machinery
// ---------------------------------------------------------------------------

namespace {

// Pseudo-remainder of f by g with respect to `var`: lc(g)^(df-dg+1) * f mod g.
Polynomial pseudo_remainder(const Polynomial& f, const Polynomial& g, int var) {
    int df = f.degree_in(var), dg = g.degree_in(var);
    if (dg < 0) throw std::domain_error("pseudo-remainder by zero");
    Polynomial rem = f;
    auto gcoeffs = g.coefficients_in(var);
    Polynomial glead = gcoeffs.back();
    int steps = df - dg + 1;
    while (true) {
        int dr = rem.degree_in(var);
        if (dr < dg || rem.is_zero()) break;
        auto rcoeffs = rem.coefficients_in(var);
        Polynomial rlead = rcoeffs.back();
        // rem <- lc(g)*rem - lc(rem)*var^(dr-dg)*g
        ExponentVec shift(f.nvars(), 0);
        shift[var] = static_cast<uint32_t>(dr - dg);
        Polynomial shifted = Polynomial::monomial(f.nvars(), shift, Rational(1)) * g;
        rem = glead * rem - rlead * shifted;
        --steps;
    }
    // Keep the classical scaling so exactness of later divisions is unaffected.
    for (; steps > 0; --steps) rem = glead * rem;
    return rem;
}

int highest_var(const Polynomial& p) {
    for (int v = p.nvars() - 1; v >= 0; --v)
        if (p.depends_on(v)) return v;
    return -1;
}

}  // namespace

Polynomial content_in(const Polynomial& p, int var) {
    auto coeffs = p.coefficients_in(var);
    Polynomial c(p.nvars());
    for (const auto& q : coeffs) {
        if (q.is_zero()) continue;
        c = poly_gcd(c, q);
        if (c.is_constant() && !c.is_zero()) break;
    }
    return c;
}

Polynomial univariate_content(const Polynomial& p, int var) {
    if (p.is_zero()) return p;
    // Group terms by the exponents of every variable except `var`; each group
    // is a univariate polynomial in `var` and the content is their gcd.
    std::map<ExponentVec, Polynomial> groups;
    for (const auto& [e, c] : p.terms()) {
        ExponentVec key = e;
        uint32_t k = key[var];
        key[var] = 0;
        auto [it, inserted] = groups.try_emplace(key, Polynomial(p.nvars()));
        ExponentVec mono(p.nvars(), 0);
        mono[var] = k;
        it->second += Polynomial::monomial(p.nvars(), mono, c);
    }
    Polynomial g(p.nvars());
    for (const auto& [key, q] : groups) {
        g = poly_gcd(g, q);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("mismatched variable counts");
    if (a.is_zero()) return b.canonical();
    if (b.is_zero()) return a.canonical();
    if (a.is_constant() || b.is_constant()) return Polynomial::constant(a.nvars(), 1);

    int va = highest_var(a), vb = highest_var(b);
    int v = std::max(va, vb);
    if (va != vb || a.degree_in(v) == 0 || b.degree_in(v) == 0) {
        // One operand is free of the top variable: gcd divides the other's
        // content with respect to it.
        const Polynomial& with = (va == v) ? a : b;
        const Polynomial& without = (va == v) ? b : a;
        return poly_gcd(content_in(with, v), without);
    }

    Polynomial ca = content_in(a, v), cb = content_in(b, v);
    Polynomial f = a.exact_divide(ca), g = b.exact_divide(cb);
    if (f.degree_in(v) < g.degree_in(v)) std::swap(f, g);
    while (!g.is_zero()) {
        Polynomial r = pseudo_remainder(f, g, v);
        f = g;
        if (r.is_zero()) {
            g = r;
        } else {
            Polynomial cr = content_in(r, v);
            g = r.exact_divide(cr);
        }
    }
    Polynomial cf = content_in(f, v);
    Polynomial pp = f.exact_divide(cf);
    return (poly_gcd(ca, cb) * pp).canonical();
}

Polynomial squarefree_part(const Polynomial& p) {
    if (p.is_zero()) throw std::domain_error("square-free part of zero polynomial");
    if (p.is_constant()) return Polynomial::constant(p.nvars(), 1);
    Polynomial d = p;
    for (int v = 0; v < p.nvars(); ++v) {
        if (!p.depends_on(v)) continue;
        d = poly_gcd(d, p.partial(v));
        if (d.is_constant()) break;
    }
    return p.exact_divide(d).canonical();
}

std::vector<std::pair<Polynomial, int>> squarefree_decomposition(const Polynomial& p) {
    if (p.is_zero()) throw std::domain_error("square-free decomposition of zero polynomial");
    std::vector<std::pair<Polynomial, int>> out;
    Polynomial q = p.canonical();
    if (q.is_constant()) return out;
    int v = highest_var(q);
    Polynomial cont = content_in(q, v);
    if (!cont.is_constant()) {
        auto inner = squarefree_decomposition(cont);
        out.insert(out.end(), inner.begin(), inner.end());
        q = q.exact_divide(cont).canonical();
    }
    // Yun's algorithm in the main variable with multivariate coefficient gcds.
    Polynomial dq = q.partial(v);
    Polynomial g = poly_gcd(q, dq);
    Polynomial c = q.exact_divide(g);
    Polynomial d = dq.exact_divide(g) - c.partial(v);
    for (int mult = 1; !c.is_constant(); ++mult) {
        Polynomial fk = poly_gcd(c, d);
        if (!fk.is_constant()) out.emplace_back(fk.canonical(), mult);
        c = c.exact_divide(fk);
        d = d.exact_divide(fk) - c.partial(v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Resultant via fraction-free (Bareiss) elimination on the Sylvester matrix
// ---------------------------------------------------------------------------

namespace {

// Determinant over Q[x1..xn]; Bareiss keeps every intermediate entry a
// polynomial (the division step is exact).
Polynomial bareiss_determinant(std::vector<std::vector<Polynomial>> m, int nvars) {
    const size_t k = m.size();
    if (k == 0) return Polynomial::constant(nvars, 1);
    int sign = 1;
    Polynomial prev = Polynomial::constant(nvars, 1);
    for (size_t col = 0; col + 1 < k; ++col) {
        // Pivot: prefer the sparsest nonzero candidate to keep growth down.
        size_t pivot = k;
        for (size_t row = col; row < k; ++row) {
            if (m[row][col].is_zero()) continue;
            if (pivot == k || m[row][col].term_count() < m[pivot][col].term_count()) pivot = row;
        }
        if (pivot == k) return Polynomial::zero(nvars);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            sign = -sign;
        }
        for (size_t row = col + 1; row < k; ++row) {
            for (size_t j = col + 1; j < k; ++j) {
                Polynomial num = m[col][col] * m[row][j] - m[row][col] * m[col][j];
                m[row][j] = num.exact_divide(prev);
            }
            m[row][col] = Polynomial::zero(nvars);
        }
        prev = m[col][col];
    }
    Polynomial det = m[k - 1][k - 1];
    return sign < 0 ? -det : det;
}

}  // namespace

Polynomial resultant(const Polynomial& p, const Polynomial& q, int elim_var) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("mismatched variable counts");
    int dp = p.degree_in(elim_var), dq = q.degree_in(elim_var);
    if (dp < 1 || dq < 1)
        throw std::domain_error("resultant requires positive degree in the eliminated variable");
    auto pc = p.coefficients_in(elim_var);
    auto qc = q.coefficients_in(elim_var);
    const int n = dp + dq;
    std::vector<std::vector<Polynomial>> m(
        static_cast<size_t>(n), std::vector<Polynomial>(static_cast<size_t>(n), Polynomial(p.nvars())));
    for (int row = 0; row < dq; ++row)
        for (int j = 0; j <= dp; ++j) m[row][row + j] = pc[static_cast<size_t>(dp - j)];
    for (int row = 0; row < dp; ++row)
        for (int j = 0; j <= dq; ++j) m[dq + row][row + j] = qc[static_cast<size_t>(dq - j)];
    return bareiss_determinant(std::move(m), p.nvars());
}

}  // namespace lojex
