#include "lojex/elimination.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace lojex {

namespace {

std::vector<std::string> system_var_names(int n, bool tangent) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    names.push_back("y");
    names.push_back("u");
    if (tangent) {
        for (int i = 1; i <= n; ++i) names.push_back("t" + std::to_string(i));
        for (int i = 1; i <= n; ++i) names.push_back("z" + std::to_string(i));
    }
    return names;
}

// Lift a polynomial in (x1..xn, y) into the system variable space.
Polynomial lift(const Polynomial& p, int nvars) {
    std::vector<int> map(p.nvars());
    for (int i = 0; i < p.nvars(); ++i) map[i] = i;  // x block then y stay in place
    return p.remap(map, nvars);
}

// degree_bound is the construction's generic total-degree bound in terms of
// deg P; it is never below the instance degree, and the worked degree-budget
// values are stated in terms of it.
void push_generator(EliminationSystem& sys, Polynomial g, const std::string& name,
                    int degree_bound) {
    if (g.is_zero()) {
        sys.dropped.push_back(name);
        return;
    }
    if (degree_bound < *g.total_degree())
        throw std::logic_error("generator degree bound below instance degree");
    sys.generators.push_back(std::move(g));
    sys.generator_names.push_back(name);
    sys.generator_degree_bounds.push_back(degree_bound);
}

void finalize_budget(EliminationSystem& sys) {
    sys.degree_budget = total_degree_product(sys.generator_degree_bounds);
}

BigInt ipow_big(long base, unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

}  // namespace

Polynomial gradient_relation(const Polynomial& P) {
    if (P.is_constant()) throw std::invalid_argument("P must be non-constant");
    const int n = P.nvars() - 1;
    const int nvars = n + 2;
    const int u = n + 1;
    Polynomial g(nvars);
    for (int i = 0; i < n; ++i) {
        Polynomial pi = lift(P.partial(i), nvars);
        g += pi * pi;
    }
    Polynomial py = lift(P.partial(n), nvars);
    g -= py * py * Polynomial::variable(nvars, u);
    return g;
}

EliminationSystem build_interior_system(const Polynomial& P, ElimRoute route, bool use_k3) {
    const int n = P.nvars() - 1;
    if (n < 1) throw std::invalid_argument("P needs at least one x variable");
    EliminationSystem sys;
    sys.kase = SystemCase::interior;
    sys.route = route;
    sys.n = n;

    const int d = P.total_degree().value_or(0);
    if (route == ElimRoute::cross) {
        sys.nvars = n + 2;
        sys.var_names = system_var_names(n, false);
        sys.y_index = n;
        sys.u_index = n + 1;
        Polynomial Pl = lift(P, sys.nvars);
        Polynomial G = gradient_relation(P);
        push_generator(sys, Pl, "P", d);
        push_generator(sys, G, "G", 2 * d - 1);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                Polynomial k = lift(P.partial(i), sys.nvars) * G.partial(j) -
                               lift(P.partial(j), sys.nvars) * G.partial(i);
                push_generator(sys, std::move(k),
                               "K4_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                               3 * d - 3);
            }
        }
        sys.component_degree_bound =
            d >= 2 ? BigInt(d) * ipow_big(3 * d - 2, static_cast<unsigned long>(n)) : BigInt(d);
    } else {
        sys.nvars = 3 * n + 2;
        sys.var_names = system_var_names(n, true);
        sys.y_index = n;
        sys.u_index = n + 1;
        auto tvar = [&](int i) { return Polynomial::variable(sys.nvars, n + 2 + i); };
        auto zvar = [&](int i) { return Polynomial::variable(sys.nvars, 2 * n + 2 + i); };
        Polynomial Pl = lift(P, sys.nvars);
        Polynomial G = gradient_relation(P);  // in n+2 vars
        Polynomial py = lift(P.partial(n), sys.nvars);
        push_generator(sys, Pl, "P", d);
        Polynomial g1 = Polynomial::variable(sys.nvars, sys.u_index);
        for (int i = 0; i < n; ++i) g1 -= tvar(i) * tvar(i);
        push_generator(sys, std::move(g1), "G1", 2);
        for (int i = 0; i < n; ++i) {
            Polynomial g2 = lift(P.partial(i), sys.nvars) + py * tvar(i);
            push_generator(sys, std::move(g2), "G2_" + std::to_string(i + 1), d);
        }
        for (int i = 0; i < n; ++i) {
            Polynomial gi = lift(G.partial(i), sys.nvars);
            Polynomial gy = lift(G.partial(n), sys.nvars);
            if (!use_k3) {
                Polynomial g3 = gi + gy * tvar(i) - py * py * zvar(i);
                push_generator(sys, std::move(g3), "G3_" + std::to_string(i + 1), 2 * d - 1);
            } else {
                Polynomial k3 = gi * py - gy * lift(P.partial(i), sys.nvars) -
                                py * py * py * zvar(i);
                push_generator(sys, std::move(k3), "K3_" + std::to_string(i + 1), 3 * d - 2);
            }
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                push_generator(sys, tvar(i) * zvar(j) - tvar(j) * zvar(i),
                               "G4_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), 2);
        sys.component_degree_bound =
            d >= 1 ? 2 * ipow_big(2 * d - 1, static_cast<unsigned long>(3 * n + 1)) : BigInt(0);
    }
    finalize_budget(sys);
    return sys;
}

EliminationSystem build_boundary_system(const Polynomial& P, const Rational& r, ElimRoute route) {
    const int n = P.nvars() - 1;
    if (n < 2)
        throw std::domain_error(
            "boundary case needs n >= 2 (an interval boundary carries no curve)");
    if (r <= 0) throw std::invalid_argument("radius must be positive");
    EliminationSystem sys;
    sys.kase = SystemCase::boundary;
    sys.route = route;
    sys.n = n;
    sys.nvars = n + 2;
    sys.var_names = system_var_names(n, false);
    sys.y_index = n;
    sys.u_index = n + 1;

    Polynomial Pl = lift(P, sys.nvars);
    Polynomial G = gradient_relation(P);
    Polynomial g0 = Polynomial::constant(sys.nvars, -(r * r));
    for (int i = 0; i < n; ++i)
        g0 += Polynomial::variable(sys.nvars, i) * Polynomial::variable(sys.nvars, i);
    const int d0 = P.total_degree().value_or(0);
    push_generator(sys, Pl, "P", d0);
    push_generator(sys, std::move(g0), "G0", 2);
    push_generator(sys, G, "G", 2 * d0 - 1);
    if (n >= 3) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int k = j + 1; k < n; ++k) {
                    auto col_p = [&](int a) { return lift(P.partial(a), sys.nvars); };
                    auto col_g = [&](int a) { return G.partial(a); };
                    auto col_x = [&](int a) { return Polynomial::variable(sys.nvars, a); };
                    Polynomial det =
                        col_p(i) * (col_g(j) * col_x(k) - col_g(k) * col_x(j)) -
                        col_g(i) * (col_p(j) * col_x(k) - col_p(k) * col_x(j)) +
                        col_x(i) * (col_p(j) * col_g(k) - col_p(k) * col_g(j));
                    push_generator(sys, std::move(det),
                                   "K4_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) +
                                       "_" + std::to_string(k + 1),
                                   3 * d0 - 2);
                }
    }
    sys.component_degree_bound =
        n == 2 ? BigInt(2 * d0) * BigInt(2 * d0 - 1)
               : (d0 >= 2 ? BigInt(d0) * ipow_big(3 * d0 - 2, static_cast<unsigned long>(n))
                          : BigInt(d0));
    finalize_budget(sys);
    return sys;
}

// ---------------------------------------------------------------------------
// Resultant cascade
// ---------------------------------------------------------------------------

namespace {

// Strip per-variable monomial content (divide by v^min_exp for every v).
Polynomial strip_monomial_content(const Polynomial& p) {
    if (p.is_zero()) return p;
    ExponentVec mins(static_cast<size_t>(p.nvars()), UINT32_MAX);
    for (const auto& [e, c] : p.terms())
        for (int i = 0; i < p.nvars(); ++i) mins[i] = std::min(mins[i], e[i]);
    bool trivial = true;
    for (auto m : mins)
        if (m > 0) trivial = false;
    if (trivial) return p;
    Polynomial divisor = Polynomial::monomial(p.nvars(), mins, Rational(1));
    return p.exact_divide(divisor);
}

// Mid-cascade cleanup: canonicalize, strip monomial content, reduce to the
// square-free part, and divide out factors that depend on neither u nor any
// variable still awaiting elimination (pure-y factors cannot carry the
// extremal curve: y is nonconstant along it).
Polynomial cleanup(const Polynomial& p, int y_index) {
    if (p.is_zero()) return p;
    Polynomial q = strip_monomial_content(p.canonical());
    if (q.is_constant()) return Polynomial::constant(p.nvars(), 1);
    q = squarefree_part(q);
    Polynomial cy = univariate_content(q, y_index);
    if (!cy.is_constant()) q = q.exact_divide(cy).canonical();
    return q;
}

bool contains_poly(const std::vector<Polynomial>& pool, const Polynomial& p) {
    for (const auto& q : pool)
        if (q == p) return true;
    return false;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

// Continued-fraction rational snap with bounded denominator; returns false
// when no small fraction approximates x to tol.
bool rationalize(double x, long max_den, double tol, Rational& out) {
    if (!std::isfinite(x)) return false;
    if (std::abs(x) < tol) {
        out = Rational(0);
        return true;
    }
    double target = x;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = target;
    for (int it = 0; it < 48; ++it) {
        double fl = std::floor(v);
        if (fl > 1e17 || fl < -1e17) break;
        long a = static_cast<long>(fl);
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (std::abs(approx - target) <= tol * std::max(1.0, std::abs(target))) {
            out = Rational(p1, q1);
            out.canonicalize();
            return true;
        }
        double rem = v - fl;
        if (rem < 1e-15) break;
        v = 1.0 / rem;
    }
    return false;
}

double scaled_sample_residual(const Polynomial& q2, std::span<const std::pair<double, double>> samples) {
    // q2 is in (u, y); samples are (y, u).
    double coeff_norm = 0;
    for (const auto& [e, c] : q2.terms()) coeff_norm += std::abs(c.get_d());
    double worst = 0;
    for (const auto& [y, u] : samples) {
        double pt[2] = {u, y};
        worst = std::max(worst, std::abs(q2.eval_double(pt)) / (1.0 + coeff_norm));
    }
    return worst;
}

// Map a (y, u) polynomial living in the system space down to 2 variables
// with order (u, y).
Polynomial to_curve_vars(const Polynomial& p, const EliminationSystem& sys) {
    std::vector<int> map(static_cast<size_t>(sys.nvars), -1);
    map[static_cast<size_t>(sys.y_index)] = 1;
    map[static_cast<size_t>(sys.u_index)] = 0;
    return p.remap(map, 2);
}

// Square-free factor list of Q with univariate contents in y and u split off
// so the keep/drop policy can act on them separately.
std::vector<CurveFactor> factor_curve(const Polynomial& q2) {
    std::vector<CurveFactor> out;
    auto sqf = squarefree_decomposition(q2);
    for (auto& [factor, mult] : sqf) {
        Polynomial f = factor;
        Polynomial cy = univariate_content(f, 1);
        if (!cy.is_constant()) {
            out.push_back({cy.canonical(), mult, false, ""});
            f = f.exact_divide(cy);
        }
        Polynomial cu = univariate_content(f, 0);
        if (!cu.is_constant()) {
            out.push_back({cu.canonical(), mult, false, ""});
            f = f.exact_divide(cu);
        }
        if (!f.is_constant()) out.push_back({f.canonical(), mult, false, ""});
    }
    return out;
}

PlaneCurve assemble_curve(const Polynomial& q_raw, const EliminationSystem& sys,
                          std::span<const std::pair<double, double>> samples,
                          const ElimOptions& opts, const std::string& provenance,
                          std::vector<std::string> notes) {
    PlaneCurve curve;
    curve.provenance = provenance;
    curve.degree_budget = sys.degree_budget;
    curve.notes = std::move(notes);
    curve.factors = factor_curve(q_raw);

    Polynomial q = Polynomial::constant(2, 1);
    bool any_kept = false;
    for (auto& cf : curve.factors) {
        if (!cf.factor.depends_on(0)) {
            cf.kept = false;
            cf.reason = "independent of u";
            continue;
        }
        if (opts.prune && !samples.empty()) {
            // Pointwise-relative vanishing: compare against the cancellation
            // scale of the factor at each sample, not a global coefficient
            // norm (samples live at widely different magnitudes).
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [y, u] : samples) {
                double pt[2] = {u, y};
                double mag = cf.factor.magnitude_at(pt);
                best = std::min(best, std::abs(cf.factor.eval_double(pt)) / (1e-300 + mag));
            }
            if (best > opts.factor_vanish_tol) {
                cf.kept = false;
                cf.reason = "does not vanish on the sampled profile";
                continue;
            }
        }
        cf.kept = true;
        q = q * cf.factor;
        any_kept = true;
    }
    if (!any_kept) {
        // Nothing survived pruning: keep every u-dependent factor and say so.
        for (auto& cf : curve.factors) {
            if (!cf.factor.depends_on(0)) continue;
            cf.kept = true;
            cf.reason = "kept by fallback (pruning removed every factor)";
            q = q * cf.factor;
            any_kept = true;
        }
        curve.notes.push_back("pruning removed every factor; kept all u-dependent factors");
    }
    if (!any_kept) throw EliminationError("no u-dependent factor in the eliminated curve");

    curve.Q = q.canonical();
    curve.degree = curve.Q.total_degree().value_or(0);
    curve.within_budget = BigInt(curve.degree) <= curve.degree_budget;
    if (!samples.empty()) {
        curve.residual = scaled_sample_residual(curve.Q, samples);
        if (curve.residual > opts.residual_tol)
            curve.notes.push_back("residual above tolerance: curve may have lost the sampled branch");
    }
    return curve;
}

PlaneCurve eliminate_resultant(const EliminationSystem& sys,
                               std::span<const std::pair<double, double>> samples,
                               const ElimOptions& opts) {
    std::vector<std::string> notes;
    std::vector<Polynomial> pool;
    for (const auto& g : sys.generators) {
        Polynomial c = cleanup(g, sys.y_index);
        if (!c.is_constant() && !contains_poly(pool, c)) pool.push_back(c);
    }
    std::vector<int> elim_vars;
    for (int v = 0; v < sys.nvars; ++v)
        if (v != sys.y_index && v != sys.u_index) elim_vars.push_back(v);

    while (true) {
        int var = -1, var_deg = INT32_MAX;
        for (int v : elim_vars) {
            int deg = -1;
            for (const auto& p : pool) deg = std::max(deg, p.degree_in(v));
            if (deg > 0 && deg < var_deg) {
                var_deg = deg;
                var = v;
            }
        }
        if (var < 0) break;

        std::vector<Polynomial> with_v, rest;
        for (auto& p : pool)
            (p.depends_on(var) ? with_v : rest).push_back(std::move(p));
        if (with_v.size() == 1) {
            // A single equation in this variable determines it; projecting
            // just forgets the constraint.
            pool = std::move(rest);
            continue;
        }
        size_t pivot = 0;
        for (size_t i = 1; i < with_v.size(); ++i) {
            int a = with_v[i].degree_in(var), b = with_v[pivot].degree_in(var);
            if (a < b || (a == b && with_v[i].term_count() < with_v[pivot].term_count())) pivot = i;
        }
        std::vector<Polynomial> produced;
        for (size_t i = 0; i < with_v.size(); ++i) {
            if (i == pivot) continue;
            Polynomial r = resultant(with_v[pivot], with_v[i], var);
            if (r.is_zero()) {
                // Shared component; retry against the cofactor once.
                Polynomial h = poly_gcd(with_v[pivot], with_v[i]);
                if (!h.is_constant()) {
                    Polynomial cof = with_v[i].exact_divide(h);
                    if (cof.degree_in(var) > 0 && with_v[pivot].degree_in(var) > 0) {
                        r = resultant(with_v[pivot], cof, var);
                    } else {
                        r = cleanup(cof, sys.y_index);
                    }
                    notes.push_back("zero resultant for " + sys.var_names[var] +
                                    "; retried against cofactor");
                }
            }
            if (r.is_zero()) {
                notes.push_back("dropped a pair with identically zero resultant in " +
                                sys.var_names[var]);
                continue;
            }
            Polynomial c = cleanup(r, sys.y_index);
            if (c.is_constant()) continue;
            if (!contains_poly(produced, c) && !contains_poly(rest, c)) produced.push_back(c);
        }
        pool = std::move(rest);
        for (auto& p : produced) pool.push_back(std::move(p));
        if (pool.empty())
            throw EliminationError("resultant collapse: every projection degenerated while eliminating " +
                                   sys.var_names[var]);
    }

    std::vector<Polynomial> plane;
    for (const auto& p : pool) {
        Polynomial q = to_curve_vars(p, sys);
        if (!q.is_constant() && !contains_poly(plane, q)) plane.push_back(q);
    }
    if (plane.empty()) throw EliminationError("elimination produced no plane polynomial");

    Polynomial q_raw(2);
    for (const auto& p : plane) q_raw = poly_gcd(q_raw, p);
    if (q_raw.is_constant()) {
        // No common curve: the projection is finite. Any single eliminated
        // polynomial still vanishes on it; take the smallest u-dependent one.
        auto better = [](const Polynomial& a, const Polynomial& b) {
            int da = a.total_degree().value_or(0), db = b.total_degree().value_or(0);
            return da < db || (da == db && a.term_count() < b.term_count());
        };
        const Polynomial* pick = nullptr;
        for (const auto& p : plane)
            if (p.depends_on(0) && (!pick || better(p, *pick))) pick = &p;
        if (!pick)
            for (const auto& p : plane)
                if (!pick || better(p, *pick)) pick = &p;
        q_raw = *pick;
        notes.push_back("projection appears finite; kept the smallest vanishing polynomial");
    }
    return assemble_curve(q_raw, sys, samples, opts, "symbolic-resultant", std::move(notes));
}

PlaneCurve eliminate_interpolate(const EliminationSystem& sys,
                                 std::span<const std::pair<double, double>> samples,
                                 const ElimOptions& opts) {
    if (samples.empty()) throw EliminationError("interpolation needs profile samples");
    double ys = 0, us = 0;
    for (const auto& [y, u] : samples) {
        ys = std::max(ys, std::abs(y));
        us = std::max(us, std::abs(u));
    }
    if (ys == 0) ys = 1;
    if (us == 0) us = 1;

    std::vector<std::string> notes;
    int feasible_cap = 0;
    for (int D = 1; D <= opts.degree_cap; ++D)
        if (static_cast<int>(samples.size()) >= (D + 1) * (D + 2) / 2) feasible_cap = D;
    if (feasible_cap < 1)
        throw EliminationError("too few profile samples to interpolate any curve");
    if (feasible_cap < opts.degree_cap)
        notes.push_back("sample count limits the search to degree " + std::to_string(feasible_cap));
    for (int D = 1; D <= feasible_cap; ++D) {
        const int monomials = (D + 1) * (D + 2) / 2;
        Eigen::MatrixXd A(static_cast<Eigen::Index>(samples.size()), monomials);
        std::vector<std::pair<int, int>> expo;  // (N, S): u^N y^S
        for (int total = 0; total <= D; ++total)
            for (int N = 0; N <= total; ++N) expo.emplace_back(N, total - N);
        for (Eigen::Index r = 0; r < A.rows(); ++r) {
            double yhat = samples[static_cast<size_t>(r)].first / ys;
            double uhat = samples[static_cast<size_t>(r)].second / us;
            for (int c = 0; c < monomials; ++c)
                A(r, c) = std::pow(uhat, expo[c].first) * std::pow(yhat, expo[c].second);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        const auto& sigma = svd.singularValues();
        double smax = sigma(0);
        std::vector<int> small;
        for (int i = 0; i < sigma.size(); ++i)
            if (sigma(i) <= opts.svd_tol * std::max(smax, 1e-300)) small.push_back(i);
        if (small.empty()) continue;

        std::vector<Polynomial> candidates;
        for (int idx : small) {
            Eigen::VectorXd v = svd.matrixV().col(idx);
            // Unscale and normalize to max |coefficient| = 1.
            std::vector<double> coeffs(static_cast<size_t>(monomials));
            double cmax = 0;
            for (int c = 0; c < monomials; ++c) {
                coeffs[static_cast<size_t>(c)] =
                    v(c) / (std::pow(us, expo[c].first) * std::pow(ys, expo[c].second));
                cmax = std::max(cmax, std::abs(coeffs[static_cast<size_t>(c)]));
            }
            if (cmax == 0) continue;
            Polynomial q(2);
            bool snapped = true;
            Polynomial q_float(2);
            for (int c = 0; c < monomials; ++c) {
                double value = coeffs[static_cast<size_t>(c)] / cmax;
                ExponentVec e{static_cast<uint32_t>(expo[c].first),
                              static_cast<uint32_t>(expo[c].second)};
                if (std::abs(value) > 1e-9)
                    q_float += Polynomial::monomial(2, e, Rational(value));
                Rational snap;
                if (rationalize(value, 1000000L, 1e-7, snap)) {
                    if (snap != 0) q += Polynomial::monomial(2, e, snap);
                } else {
                    snapped = false;
                }
            }
            Polynomial chosen = (snapped && !q.is_zero()) ? q.canonical() : q_float.canonical();
            if (chosen.is_zero() || chosen.is_constant()) continue;
            if (scaled_sample_residual(chosen, samples) <= opts.residual_tol)
                candidates.push_back(chosen);
            else if (!snapped)
                notes.push_back("degree " + std::to_string(D) + " candidate failed the residual check");
        }
        if (candidates.empty()) continue;
        if (candidates.size() > 1) {
            // Distinct null directions that all interpolate: ambiguous rank
            // deficiency. Report every candidate.
            std::vector<std::string> texts;
            std::vector<std::string> names{"u", "y"};
            for (const auto& c : candidates) texts.push_back(render_polynomial(c, names));
            bool all_equal = true;
            for (const auto& c : candidates)
                if (!(c == candidates[0])) all_equal = false;
            if (!all_equal)
                throw EliminationError("ambiguous interpolation null space; candidate curves: " +
                                       join(texts, " | "));
        }
        return assemble_curve(candidates[0], sys, samples, opts, "numeric-interpolation",
                              std::move(notes));
    }
    // Nothing certified within the cap: return the best least-squares curve
    // at the largest feasible degree, flagged so the degree-parity bound is
    // not trusted.
    const int D = feasible_cap;
    const int monomials = (D + 1) * (D + 2) / 2;
    Eigen::MatrixXd A(static_cast<Eigen::Index>(samples.size()), monomials);
    std::vector<std::pair<int, int>> expo;
    for (int total = 0; total <= D; ++total)
        for (int N = 0; N <= total; ++N) expo.emplace_back(N, total - N);
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        double yhat = samples[static_cast<size_t>(r)].first / ys;
        double uhat = samples[static_cast<size_t>(r)].second / us;
        for (int c = 0; c < monomials; ++c)
            A(r, c) = std::pow(uhat, expo[c].first) * std::pow(yhat, expo[c].second);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    Eigen::VectorXd v = svd.matrixV().col(svd.matrixV().cols() - 1);
    Polynomial q(2);
    for (int c = 0; c < monomials; ++c) {
        double value = v(c) / (std::pow(us, expo[c].first) * std::pow(ys, expo[c].second));
        if (std::abs(value) < 1e-12) continue;
        q += Polynomial::monomial(
            2, ExponentVec{static_cast<uint32_t>(expo[c].first), static_cast<uint32_t>(expo[c].second)},
            Rational(value));
    }
    if (q.is_zero() || q.is_constant())
        throw EliminationError("interpolation failed to produce a curve within the degree cap");
    ElimOptions loose = opts;
    loose.residual_tol = std::numeric_limits<double>::infinity();
    PlaneCurve curve = assemble_curve(q.canonical(), sys, samples, loose, "numeric-interpolation",
                                      {"curve degree >= cap: degree-parity bound not certified, "
                                       "slopes still valid as candidates"});
    curve.degree_capped = true;
    return curve;
}

}  // namespace

PlaneCurve eliminate_to_curve(const EliminationSystem& sys, ElimMethod method,
                              std::span<const std::pair<double, double>> profile_samples,
                              const ElimOptions& opts) {
    if (method == ElimMethod::resultant) return eliminate_resultant(sys, profile_samples, opts);
    return eliminate_interpolate(sys, profile_samples, opts);
}

Rational parity_degree_bound(const PlaneCurve& curve) {
    int D = curve.degree;
    if (D < 1) throw std::domain_error("curve degree must be >= 1");
    if (D % 2 == 0) return Rational(1) - Rational(1, D);
    return Rational(1) - Rational(1, D + 1);
}

ExponentCandidates slope_candidates(const PlaneCurve& curve) {
    ExponentCandidates out;
    out.parity_bound = parity_degree_bound(curve);
    std::set<Rational> seen;
    const auto& terms = curve.Q.terms();
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        for (auto jt = std::next(it); jt != terms.end(); ++jt) {
            long n0 = it->first[0], s0 = it->first[1];
            long n1 = jt->first[0], s1 = jt->first[1];
            if (n0 == n1) continue;
            Rational slope(s1 - s0, 2 * (n0 - n1));
            slope.canonicalize();
            if (slope > 0 && slope < 1) seen.insert(slope);
        }
    }
    out.slopes.assign(seen.begin(), seen.end());
    return out;
}

}  // namespace lojex
