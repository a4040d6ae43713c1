#include "lojex/root_isolation.hpp"

#include <algorithm>

namespace lojex {

namespace {

// Dense univariate representation, ascending powers, no trailing zeros.
using Dense = std::vector<Rational>;

Dense trim(Dense v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

Dense derivative(const Dense& p) {
    Dense d;
    for (size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Rational(static_cast<long>(k)));
    return trim(std::move(d));
}

Rational eval(const Dense& p, const Rational& x) {
    Rational acc(0);
    for (size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return acc;
}

// Remainder of polynomial division (rational arithmetic; sizes here are tiny).
Dense remainder(Dense num, const Dense& den) {
    while (num.size() >= den.size() && !num.empty()) {
        Rational q = num.back() / den.back();
        size_t shift = num.size() - den.size();
        for (size_t k = 0; k < den.size(); ++k) num[shift + k] -= q * den[k];
        num = trim(std::move(num));
        if (num.size() >= den.size() && num.size() > 0 && num.back() == 0) num = trim(std::move(num));
    }
    return num;
}

// Divide out an exact rational root r: p / (x - r).
Dense deflate(const Dense& p, const Rational& r) {
    Dense q(p.size() - 1);
    Rational carry = p.back();
    for (size_t k = p.size() - 1; k-- > 0;) {
        q[k] = carry;
        carry = p[k] + carry * r;
    }
    return trim(std::move(q));
}

struct SturmChain {
    std::vector<Dense> seq;

    explicit SturmChain(const Dense& p) {
        seq.push_back(p);
        Dense d = derivative(p);
        if (!d.empty()) seq.push_back(d);
        while (seq.size() >= 2) {
            Dense r = remainder(seq[seq.size() - 2], seq.back());
            if (r.empty()) break;
            for (auto& c : r) c = -c;
            seq.push_back(std::move(r));
        }
    }

    int variations(const Rational& x) const {
        int count = 0, prev = 0;
        for (const auto& p : seq) {
            Rational v = eval(p, x);
            int s = sgn(v);
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    }
};

}  // namespace

std::vector<RootInterval> isolate_real_roots(const Polynomial& p, const Rational& lo,
                                             const Rational& hi, const Rational& tol) {
    if (p.is_zero()) throw std::domain_error("cannot isolate roots of the zero polynomial");
    if (lo >= hi) throw std::invalid_argument("empty interval");
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
    int var = -1;
    for (int v = 0; v < p.nvars(); ++v) {
        if (!p.depends_on(v)) continue;
        if (var >= 0) throw std::domain_error("polynomial is not univariate");
        var = v;
    }
    std::vector<RootInterval> found;
    if (var < 0) return found;  // nonzero constant: no roots

    auto coeffs = p.coefficients_in(var);
    Dense dense;
    for (const auto& c : coeffs) dense.push_back(c.is_zero() ? Rational(0) : c.constant_term());
    dense = trim(std::move(dense));

    auto record_exact = [&found](const Rational& r) {
        for (const auto& iv : found)
            if (iv.lo == r && iv.hi == r) return;
        found.push_back({r, r});
    };

    Rational a = lo, b = hi;
    // Exact roots at the query endpoints are emitted as degenerate intervals
    // and divided out (to full multiplicity) so the Sturm counts below see
    // nonzero endpoint values.
    while (dense.size() > 1 && eval(dense, a) == 0) {
        record_exact(a);
        dense = deflate(dense, a);
    }
    while (dense.size() > 1 && eval(dense, b) == 0) {
        record_exact(b);
        dense = deflate(dense, b);
    }
    if (dense.size() <= 1) {
        std::sort(found.begin(), found.end(),
                  [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
        return found;
    }

    // Worklist bisection guided by Sturm variation counts. An exact root hit
    // at a bisection point deflates the polynomial and restarts, keeping all
    // endpoint evaluations nonzero.
restart:
    SturmChain chain(dense);
    struct Segment {
        Rational a, b;
        int va, vb;
    };
    std::vector<Segment> work{{a, b, chain.variations(a), chain.variations(b)}};
    std::vector<RootInterval> isolated;
    while (!work.empty()) {
        Segment s = work.back();
        work.pop_back();
        int count = s.va - s.vb;
        if (count <= 0) continue;
        if (count == 1 && s.b - s.a <= tol) {
            isolated.push_back({s.a, s.b});
            continue;
        }
        Rational mid = (s.a + s.b) / 2;
        if (eval(dense, mid) == 0) {
            record_exact(mid);
            dense = deflate(dense, mid);
            while (dense.size() > 1 && eval(dense, mid) == 0) dense = deflate(dense, mid);
            if (dense.size() <= 1) goto done;
            goto restart;
        }
        int vm = chain.variations(mid);
        work.push_back({s.a, mid, s.va, vm});
        work.push_back({mid, s.b, vm, s.vb});
    }
    found.insert(found.end(), isolated.begin(), isolated.end());
done:
    std::sort(found.begin(), found.end(),
              [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    return found;
}

}  // namespace lojex
