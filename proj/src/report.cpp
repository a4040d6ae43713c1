#include "lojex/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lojex {

namespace {

std::vector<std::string> branch_var_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    names.push_back("y");
    return names;
}

json entry_to_json(const BoundEntry& e) {
    json j;
    j["name"] = e.name;
    switch (e.kind) {
        case BoundKind::rho_bound: j["kind"] = "rho_bound"; break;
        case BoundKind::dist_exponent: j["kind"] = "dist_exponent"; break;
        case BoundKind::sufficiency_degree: j["kind"] = "sufficiency_degree"; break;
        case BoundKind::loj_exponent: j["kind"] = "loj_exponent"; break;
        case BoundKind::total_degree: j["kind"] = "total_degree"; break;
    }
    j["value"] = e.kind == BoundKind::rho_bound ? one_minus_inverse_str(e.denominator)
                                                : rational_str(e.value);
    if (e.kind == BoundKind::rho_bound) j["denominator"] = e.denominator.get_str();
    j["source"] = e.source;
    if (!e.note.empty()) j["note"] = e.note;
    j["best"] = e.best;
    return j;
}

double entry_value_double(const BoundEntry& e) { return e.value.get_d(); }

std::vector<std::pair<double, double>> profile_pairs(const CriticalProfile& p,
                                                     bool boundary_only = false) {
    std::vector<std::pair<double, double>> out;
    for (const auto& rec : p.levels) {
        if (!rec.reachable || !rec.converged) continue;
        if (boundary_only && !rec.boundary) continue;
        out.emplace_back(rec.y, rec.u);
    }
    return out;
}

struct Verdict {
    std::string name;
    std::string status;  // pass | fail | informational
    bool hard = false;
    std::string detail;
};

json verdicts_to_json(const std::vector<Verdict>& vs) {
    json arr = json::array();
    for (const auto& v : vs) {
        json j;
        j["name"] = v.name;
        j["status"] = v.status;
        j["hard"] = v.hard;
        j["detail"] = v.detail;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace

std::string rational_str(const Rational& r) {
    return r.get_den() == 1 ? r.get_num().get_str() : r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string one_minus_inverse_str(const BigInt& denominator) {
    if (denominator == 1) return "0";
    return "1 - 1/" + denominator.get_str();
}

BranchSpec branch_spec_from_json(const json& doc) {
    BranchSpec spec;
    spec.p_text = doc.at("P").get<std::string>();
    spec.n = doc.at("vars").get<int>();
    spec.seed_x = doc.at("seed_x").get<std::vector<double>>();
    spec.seed_y = doc.at("seed_y").get<double>();
    spec.radius = doc.at("radius").get<double>();
    return spec;
}

NashBranch branch_from_spec(const BranchSpec& spec) {
    auto names = branch_var_names(spec.n);
    Polynomial P = parse_polynomial(spec.p_text, names);
    return NashBranch(P, spec.seed_x, spec.seed_y, spec.radius);
}

NashBranch branch_from_file(const std::string& path, BranchSpec* spec_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open branch file: " + path);
    json doc = json::parse(in);
    BranchSpec spec = branch_spec_from_json(doc);
    if (spec_out) *spec_out = spec;
    return branch_from_spec(spec);
}

json bounds_to_json(const BoundReport& rho, const BoundReport& suff, const BoundReport& dist,
                    const PriorComparison& prior) {
    json j;
    json flat;
    for (const auto& e : rho.entries) flat[e.name] = one_minus_inverse_str(e.denominator);
    j["rho_bounds"] = flat;
    if (const BoundEntry* b = rho.best()) j["rho_best"] = b->name;
    json entries = json::array();
    for (const auto& e : rho.entries) entries.push_back(entry_to_json(e));
    j["rho_entries"] = entries;

    json s;
    if (const BoundEntry* b = suff.best()) {
        s["k"] = b->denominator.get_str();
        s["source"] = b->source;
    }
    json sentries = json::array();
    for (const auto& e : suff.entries) sentries.push_back(entry_to_json(e));
    s["entries"] = sentries;
    j["sufficiency"] = s;

    json dentries = json::array();
    for (const auto& e : dist.entries) dentries.push_back(entry_to_json(e));
    j["distance"] = {{"entries", dentries}};

    j["prior_comparison"] = {{"current", prior.current.get_str()},
                             {"prior", prior.prior.get_str()},
                             {"sharper", prior.sharper}};
    return j;
}

json curve_to_json(const PlaneCurve& curve) {
    static const std::vector<std::string> names{"u", "y"};
    json j;
    j["Q"] = render_polynomial(curve.Q, names);
    j["D"] = curve.degree;
    Rational lemma = curve.degree >= 1 ? parity_degree_bound(curve) : Rational(0);
    j["lemma58"] = rational_str(lemma);
    auto cands = curve.degree >= 1 ? slope_candidates(curve) : ExponentCandidates{};
    json slopes = json::array(), slopes_f = json::array();
    for (const auto& s : cands.slopes) {
        slopes.push_back(rational_str(s));
        slopes_f.push_back(s.get_d());
    }
    j["slopes"] = slopes;
    j["slopes_float"] = slopes_f;
    j["residual"] = curve.residual;
    j["budget"] = curve.degree_budget.get_str();
    j["within_budget"] = curve.within_budget;
    j["degree_capped"] = curve.degree_capped;
    j["provenance"] = curve.provenance;
    json factors = json::array();
    for (const auto& f : curve.factors) {
        json fj;
        fj["factor"] = render_polynomial(f.factor, names);
        fj["multiplicity"] = f.multiplicity;
        fj["kept"] = f.kept;
        if (!f.reason.empty()) fj["reason"] = f.reason;
        factors.push_back(fj);
    }
    j["factors"] = factors;
    if (!curve.notes.empty()) j["notes"] = curve.notes;
    return j;
}

json profile_to_json(const CriticalProfile& profile) {
    json j;
    j["epsilon"] = profile.epsilon;
    json levels = json::array();
    for (const auto& rec : profile.levels) {
        json r;
        r["y"] = rec.y;
        r["u"] = rec.reachable ? json(rec.u) : json();
        r["reachable"] = rec.reachable;
        r["converged"] = rec.converged;
        r["boundary"] = rec.boundary;
        r["starts_used"] = rec.starts_used;
        r["lagrange_residual"] = rec.lagrange_residual;
        if (rec.reachable) r["argmin"] = rec.argmin;
        levels.push_back(r);
    }
    j["levels"] = levels;
    return j;
}

json fit_to_json(const ExponentFit& fit) {
    json j;
    j["rho_hat"] = fit.rho_hat;
    j["c_hat"] = fit.c_hat;
    j["c0_hat"] = fit.c0_hat;
    j["residual"] = fit.residual;
    j["converged_levels"] = fit.converged_levels;
    j["level_range"] = {fit.y_min, fit.y_max};
    j["negative_slope"] = fit.negative_slope;
    j["method"] = fit.method;
    return j;
}

json distance_fit_to_json(const DistanceFit& fit) {
    json j;
    j["alpha_hat"] = fit.alpha_hat;
    j["c_hat"] = fit.c_hat;
    j["residual"] = fit.residual;
    j["shells_used"] = fit.shells_used;
    j["zero_sample_size"] = fit.zero_sample_size;
    j["sample_spacing"] = fit.sample_spacing;
    j["gradient_mode"] = fit.gradient_mode;
    return j;
}

json trajectory_to_json(const Trajectory& traj) {
    json j;
    j["start_f"] = traj.start_f;
    j["arc_length"] = traj.arc_length;
    j["terminal"] = flow_terminal_name(traj.terminal);
    j["steps_recorded"] = traj.points.size();
    j["f_end"] = traj.f_values.empty() ? json() : json(traj.f_values.back());
    j["end"] = traj.points.empty() ? json() : json(traj.points.back());
    return j;
}

json violation_to_json(const ViolationReport& rep) {
    json j;
    j["samples"] = rep.samples;
    j["violations"] = rep.violations;
    j["worst_margin"] = rep.worst_margin;
    j["pass"] = rep.pass;
    return j;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

json run_bounds_cmd(int n, int d, const Assumptions& a, std::optional<Rational> user_rho) {
    json j;
    j["schema"] = 1;
    j["n"] = n;
    j["d"] = d;
    j["assumptions"] = {{"partial_y_nonzero", a.partial_y_nonzero},
                        {"polynomial", a.polynomial_f},
                        {"rational", a.rational_f},
                        {"isolated_zero", a.isolated_zero}};
    auto rho = rho_bounds(n, d, a);
    auto suff = sufficiency_degrees(n, d, a);
    auto dist = dist_exponents(n, d, a, user_rho);
    auto prior = prior_bound_comparison(n, d);
    j.update(bounds_to_json(rho, suff, dist, prior));
    return j;
}

json run_suffdeg_formula_cmd(int n, int d, const Assumptions& a) {
    json j;
    j["schema"] = 1;
    j["n"] = n;
    j["d"] = d;
    auto suff = sufficiency_degrees(n, d, a);
    if (const BoundEntry* b = suff.best()) {
        j["k"] = b->denominator.get_str();
        j["source"] = b->source;
    }
    json entries = json::array();
    for (const auto& e : suff.entries) entries.push_back(entry_to_json(e));
    j["entries"] = entries;
    return j;
}

json run_suffdeg_audit_cmd(const std::string& branch_path, std::optional<BigInt> k_opt,
                           uint64_t seed) {
    BranchSpec spec;
    NashBranch branch = branch_from_file(branch_path, &spec);
    const int n = branch.dim(), d = branch.degree();
    json j;
    j["schema"] = 1;
    j["n"] = n;
    j["d"] = d;
    BigInt k;
    std::string source = "user";
    if (k_opt) {
        k = *k_opt;
    } else {
        Assumptions a;
        a.polynomial_f = branch.polynomial_form();
        auto suff = sufficiency_degrees(n, d, a);
        const BoundEntry* b = suff.best();
        k = b->denominator;
        source = b->source;
    }
    if (k < 2) throw std::domain_error("audit needs k >= 2");
    j["k"] = k.get_str();
    j["k_source"] = source;

    ZeroSetOptions zopts;
    zopts.target_size = 4096;
    auto zeros = sample_zero_set(branch, branch.seed_x(), zopts);
    PointIndex zindex(std::move(zeros));
    DistanceFitOptions dopts;
    dopts.gradient_mode = true;
    dopts.seed = seed;
    DistanceFit fit = fit_distance_exponent(branch, branch.seed_x(), zindex, dopts);
    j["beta_hat"] = fit.alpha_hat;
    j["fit"] = distance_fit_to_json(fit);
    double k_minus_1 = BigInt(k - 1).get_d();
    j["k_minus_1"] = k_minus_1;
    j["margin"] = k_minus_1 - fit.alpha_hat;
    bool pass = fit.alpha_hat <= k_minus_1;
    j["verdict"] = pass ? "pass" : "fail";
    return j;
}

namespace {

struct EstimateOutcome {
    CriticalProfile pos, neg;
    std::optional<ExponentFit> fit_pos, fit_neg;
    double rho_hat = std::numeric_limits<double>::quiet_NaN();
    double c_hat = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    double epsilon = 0;
    CriticalValueScan scan;
};

EstimateOutcome run_estimate_core(const NashBranch& branch, std::span<const double> center,
                                  std::optional<double> epsilon, int levels, int starts,
                                  double scan_window, int scan_grid) {
    EstimateOutcome out;
    if (epsilon) {
        out.epsilon = *epsilon;
        out.scan.window = *epsilon;
        out.scan.suggested_epsilon = *epsilon;
    } else {
        double window = scan_window;
        if (window <= 0) {
            auto pts = halton_ball_points(128, center, 0.95 * branch.radius());
            double fmax = 0;
            for (const auto& p : pts) {
                try {
                    fmax = std::max(fmax, std::abs(branch.eval(p)));
                } catch (const std::runtime_error&) {
                }
            }
            window = fmax > 0 ? 0.5 * fmax : 1.0;
        }
        out.scan = critical_value_scan(branch, center, window, scan_grid);
        out.epsilon = out.scan.suggested_epsilon;
    }
    ProfileOptions popts;
    popts.level_count = levels;
    popts.starts = starts;
    popts.sign = +1;
    out.pos = sample_profile(branch, center, out.epsilon, popts);
    popts.sign = -1;
    out.neg = sample_profile(branch, center, out.epsilon, popts);
    try {
        out.fit_pos = fit_exponent(out.pos);
    } catch (const FitError&) {
    }
    try {
        out.fit_neg = fit_exponent(out.neg);
    } catch (const FitError&) {
    }
    if (out.fit_pos || out.fit_neg) {
        double rp = out.fit_pos ? out.fit_pos->rho_hat : -std::numeric_limits<double>::infinity();
        double rn = out.fit_neg ? out.fit_neg->rho_hat : -std::numeric_limits<double>::infinity();
        out.rho_hat = std::max(rp, rn);
        out.residual = rp >= rn ? (out.fit_pos ? out.fit_pos->residual : 0.0)
                                : (out.fit_neg ? out.fit_neg->residual : 0.0);
        // Safe constant for the common exponent across both signs.
        double c = std::numeric_limits<double>::infinity();
        for (const CriticalProfile* prof : {&out.pos, &out.neg}) {
            for (const auto& rec : prof->levels) {
                if (!rec.reachable || !rec.converged || rec.u <= 0) continue;
                c = std::min(c, std::sqrt(rec.u) / std::pow(std::abs(rec.y), out.rho_hat));
            }
        }
        if (std::isfinite(c)) out.c_hat = c;
    }
    return out;
}

// Dense profile sample on a gentle geometric schedule: interpolation needs
// many levels over many decades to discriminate the minimal curve from
// short-arc approximants.
std::vector<std::pair<double, double>> interpolation_samples(const NashBranch& branch,
                                                             std::span<const double> center,
                                                             double eps, int cap, int starts,
                                                             bool boundary_only) {
    int level_count = (cap + 1) * (cap + 2) / 2 + 6;
    ProfileOptions popts;
    popts.starts = starts;
    std::vector<double> lv;
    for (int k = 1; k <= level_count; ++k) lv.push_back(eps * std::pow(0.82, k));
    popts.explicit_levels = lv;
    CriticalProfile prof = sample_profile(branch, center, eps, popts);
    auto out = profile_pairs(prof, boundary_only);
    for (double& l : lv) l = -l;
    popts.explicit_levels = lv;
    CriticalProfile profn = sample_profile(branch, center, eps, popts);
    auto more = profile_pairs(profn, boundary_only);
    out.insert(out.end(), more.begin(), more.end());
    return out;
}

}  // namespace

json run_estimate_cmd(const std::string& branch_path, std::optional<std::vector<double>> center,
                      std::optional<double> epsilon, int levels, int starts, uint64_t seed) {
    (void)seed;  // sampling is deterministic (low-discrepancy starts)
    BranchSpec spec;
    NashBranch branch = branch_from_file(branch_path, &spec);
    std::vector<double> c = center.value_or(branch.seed_x());
    if (static_cast<int>(c.size()) != branch.dim())
        throw std::invalid_argument("center dimension mismatch");
    EstimateOutcome out = run_estimate_core(branch, c, epsilon, levels, starts, 0.0, 32);
    json j;
    j["schema"] = 1;
    j["branch"] = {{"P", spec.p_text}, {"n", spec.n}, {"d", branch.degree()}};
    j["epsilon"] = out.epsilon;
    if (!out.scan.flagged_levels.empty()) j["flagged_critical_levels"] = out.scan.flagged_levels;
    j["positive"] = profile_to_json(out.pos);
    j["negative"] = profile_to_json(out.neg);
    if (out.fit_pos) j["fit_positive"] = fit_to_json(*out.fit_pos);
    if (out.fit_neg) j["fit_negative"] = fit_to_json(*out.fit_neg);
    j["rho_hat"] = std::isnan(out.rho_hat) ? json() : json(out.rho_hat);
    j["c_hat"] = std::isnan(out.c_hat) ? json() : json(out.c_hat);
    j["residual"] = std::isnan(out.residual) ? json() : json(out.residual);
    return j;
}

json run_eliminate_cmd(const std::string& branch_path, SystemCase kase, std::optional<double> r,
                       ElimMethod method, ElimRoute route, int cap, int levels, int starts,
                       uint64_t seed) {
    (void)seed;
    BranchSpec spec;
    NashBranch branch = branch_from_file(branch_path, &spec);
    if (kase == SystemCase::boundary && !r)
        throw std::invalid_argument("case II requires --r RADIUS");

    // Profile samples drive pruning, the residual check, and interpolation.
    NashBranch sample_branch =
        kase == SystemCase::boundary
            ? NashBranch(branch.relation(), branch.seed_x(), branch.seed_y(), *r)
            : branch;
    std::vector<double> center = branch.seed_x();
    int level_count = levels;
    if (method == ElimMethod::interpolate)
        level_count = std::max(levels, (cap + 1) * (cap + 2) / 2 + 6);
    EstimateOutcome est;
    std::vector<std::pair<double, double>> samples;
    try {
        if (method == ElimMethod::interpolate && level_count > levels) {
            double window = 0;
            auto pts = halton_ball_points(128, center, 0.95 * sample_branch.radius());
            for (const auto& p : pts) {
                try {
                    window = std::max(window, std::abs(sample_branch.eval(p)));
                } catch (const std::runtime_error&) {
                }
            }
            auto scan = critical_value_scan(sample_branch, center, window > 0 ? 0.5 * window : 1.0, 32);
            est.epsilon = scan.suggested_epsilon;
            samples = interpolation_samples(sample_branch, center, est.epsilon, cap, starts,
                                            kase == SystemCase::boundary);
        } else {
            est = run_estimate_core(sample_branch, center, std::nullopt, level_count, starts, 0.0, 32);
            samples = profile_pairs(est.pos, kase == SystemCase::boundary);
            auto more = profile_pairs(est.neg, kase == SystemCase::boundary);
            samples.insert(samples.end(), more.begin(), more.end());
        }
    } catch (const std::runtime_error&) {
        // Elimination can still run unpruned.
    }

    EliminationSystem sys = kase == SystemCase::interior
                                ? build_interior_system(branch.relation(), route)
                                : build_boundary_system(branch.relation(), Rational(*r), route);
    ElimOptions eopts;
    eopts.degree_cap = cap;
    PlaneCurve curve = eliminate_to_curve(sys, method, samples, eopts);

    json j;
    j["schema"] = 1;
    j["branch"] = {{"P", spec.p_text}, {"n", spec.n}, {"d", branch.degree()}};
    j["case"] = kase == SystemCase::interior ? "I" : "II";
    j["route"] = route == ElimRoute::cross ? "k" : "tz";
    j["method"] = method == ElimMethod::resultant ? "resultant" : "interpolate";
    json gens = json::array();
    for (size_t i = 0; i < sys.generators.size(); ++i) {
        gens.push_back({{"name", sys.generator_names[i]},
                        {"degree", *sys.generators[i].total_degree()}});
    }
    j["generators"] = gens;
    if (!sys.dropped.empty()) j["identically_zero"] = sys.dropped;
    j["component_degree_bound"] = sys.component_degree_bound.get_str();
    j["samples_used"] = samples.size();
    j.update(curve_to_json(curve));
    return j;
}

json run_flow_cmd(const std::string& branch_path, const std::vector<double>& start,
                  double stop_tol, std::optional<std::pair<double, double>> check_rho_c,
                  const std::string& trace_path, uint64_t seed) {
    BranchSpec spec;
    NashBranch branch = branch_from_file(branch_path, &spec);
    Region X = Region::ball(branch.seed_x(), branch.radius());
    FlowOptions fopts;
    fopts.stop_tol_f = stop_tol;
    Trajectory traj = flow(branch, start, X, fopts);
    json j;
    j["schema"] = 1;
    j["branch"] = {{"P", spec.p_text}, {"n", spec.n}};
    j["start"] = start;
    j.update(trajectory_to_json(traj));
    if (check_rho_c) {
        auto [rho, C] = *check_rho_c;
        ZeroSetOptions zopts;
        zopts.target_size = 2048;
        std::optional<double> dist, dist_end;
        try {
            PointIndex zindex(sample_zero_set(branch, branch.seed_x(), zopts));
            dist = zindex.nearest_distance(start);
            if (!traj.points.empty()) dist_end = zindex.nearest_distance(traj.points.back());
        } catch (const std::runtime_error&) {
        }
        SandwichCheck check = check_length_bound(traj, rho, C, dist, dist_end, 1e-3);
        bool in_u = in_u_region(branch, start, X, rho, C);
        json cj;
        cj["rho"] = rho;
        cj["C"] = C;
        cj["in_u_region"] = in_u;
        cj["applicable"] = check.applicable;
        cj["lower_ok"] = check.lower_ok;
        cj["upper_ok"] = check.upper_ok;
        cj["lower_margin"] = check.lower_margin;
        cj["upper_margin"] = check.upper_margin;
        cj["upper_tightness"] = check.upper_tightness;
        if (dist) cj["dist_to_zero_set"] = *dist;
        if (!in_u)
            cj["note"] = "start outside the U region: the upper length bound is informational only";
        j["length_bound_check"] = cj;
    }
    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot open trace file: " + trace_path);
        for (int i = 0; i < branch.dim(); ++i) out << "x" << (i + 1) << ",";
        out << "f\n";
        for (size_t k = 0; k < traj.points.size(); ++k) {
            for (double c : traj.points[k]) out << c << ",";
            out << traj.f_values[k] << "\n";
        }
        j["trace"] = trace_path;
    }
    (void)seed;
    return j;
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

ReportResult run_report(const std::string& branch_path, const ReportOptions& opts) {
#ifdef _OPENMP
    if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif
    BranchSpec spec;
    NashBranch branch = branch_from_file(branch_path, &spec);
    const int n = branch.dim();
    const int d = branch.degree();
    std::vector<double> center = branch.seed_x();

    json j;
    j["schema"] = 1;
    j["seed"] = opts.seed;
    j["branch"] = {{"P", spec.p_text},
                   {"n", n},
                   {"d", d},
                   {"seed_x", spec.seed_x},
                   {"seed_y", spec.seed_y},
                   {"radius", spec.radius},
                   {"polynomial_form", branch.polynomial_form()},
                   {"degree_note",
                    "deg P is used as-is; irreducibility is not verified, so the bounds are "
                    "conservative for reducible P"}};

    EstimateOutcome est = run_estimate_core(branch, center, std::nullopt, opts.levels, opts.starts,
                                            opts.scan_window, opts.scan_grid);
    j["epsilon"] = est.epsilon;
    if (!est.scan.flagged_levels.empty()) j["flagged_critical_levels"] = est.scan.flagged_levels;

    // Zero-set sample: needed for distance fits and flow lower bounds.
    std::optional<PointIndex> zindex;
    std::string zero_err;
    try {
        ZeroSetOptions zopts;
        zopts.target_size = opts.zero_sample;
        zindex.emplace(sample_zero_set(branch, center, zopts));
    } catch (const std::runtime_error& e) {
        zero_err = e.what();
    }

    // Assumption flags from empirical evidence (never verified symbolically).
    Assumptions assume;
    assume.polynomial_f = branch.polynomial_form();
    {
        double min_py = std::numeric_limits<double>::infinity();
        auto probe = [&](std::span<const double> x) {
            try {
                min_py = std::min(min_py, std::abs(branch.partial_y_at(x)));
            } catch (const std::runtime_error&) {
            }
        };
        for (const CriticalProfile* prof : {&est.pos, &est.neg})
            for (const auto& rec : prof->levels)
                if (rec.reachable) probe(rec.argmin);
        for (const auto& p : halton_ball_points(64, center, 0.9 * branch.radius())) probe(p);
        assume.partial_y_nonzero = std::isfinite(min_py) && min_py > 1e-8;
        j["assumptions"] = {{"partial_y_nonzero", assume.partial_y_nonzero},
                            {"partial_y_min_observed", std::isfinite(min_py) ? json(min_py) : json()},
                            {"polynomial", assume.polynomial_f},
                            {"rational", assume.rational_f},
                            {"evidence", "empirical (sampled), not verified"}};
    }
    if (zindex) {
        double far = 0;
        for (const auto& z : zindex->points()) {
            double dd = 0;
            for (int i = 0; i < n; ++i) dd += (z[i] - center[i]) * (z[i] - center[i]);
            far = std::max(far, std::sqrt(dd));
        }
        assume.isolated_zero = far < 1e-2 * branch.radius();
        j["assumptions"]["isolated_zero"] = assume.isolated_zero;
    }

    auto rho_rep = rho_bounds(n, d, assume);
    auto suff_rep = sufficiency_degrees(n, d, assume);
    auto dist_rep = dist_exponents(n, d, assume);
    auto prior = prior_bound_comparison(n, d);
    j["bounds"] = bounds_to_json(rho_rep, suff_rep, dist_rep, prior);

    json prof_json;
    prof_json["positive"] = profile_to_json(est.pos);
    prof_json["negative"] = profile_to_json(est.neg);
    if (est.fit_pos) prof_json["fit_positive"] = fit_to_json(*est.fit_pos);
    if (est.fit_neg) prof_json["fit_negative"] = fit_to_json(*est.fit_neg);
    prof_json["rho_hat"] = std::isnan(est.rho_hat) ? json() : json(est.rho_hat);
    prof_json["c_hat"] = std::isnan(est.c_hat) ? json() : json(est.c_hat);
    j["profile"] = prof_json;

    auto samples = profile_pairs(est.pos);
    {
        auto more = profile_pairs(est.neg);
        samples.insert(samples.end(), more.begin(), more.end());
    }
    // Elimination works against a denser level schedule; the fit-schedule
    // samples alone span too short an arc to pin down the minimal curve.
    try {
        auto dense = interpolation_samples(branch, center, est.epsilon, opts.degree_cap,
                                           opts.starts, false);
        if (dense.size() >= samples.size()) samples = std::move(dense);
    } catch (const std::runtime_error&) {
    }

    // Elimination: symbolic when the dimension keeps resultants tractable,
    // numeric interpolation alongside for cross-validation.
    json elim;
    std::optional<PlaneCurve> interior_curve;
    ElimOptions eopts;
    eopts.degree_cap = opts.degree_cap;
    EliminationSystem isys = build_interior_system(branch.relation(), ElimRoute::cross);
    if (n <= 3) {
        try {
            interior_curve = eliminate_to_curve(isys, ElimMethod::resultant, samples, eopts);
            elim["interior"] = curve_to_json(*interior_curve);
        } catch (const EliminationError& e) {
            elim["interior_error"] = e.what();
        }
    }
    std::optional<PlaneCurve> interp_curve;
    try {
        interp_curve = eliminate_to_curve(isys, ElimMethod::interpolate, samples, eopts);
        elim["interior_interpolated"] = curve_to_json(*interp_curve);
    } catch (const EliminationError& e) {
        elim["interior_interpolated_error"] = e.what();
    }
    if (interior_curve && interp_curve)
        elim["methods_agree"] = interior_curve->Q == interp_curve->Q;
    if (!interior_curve && interp_curve) interior_curve = interp_curve;

    if (opts.boundary_case && n >= 2 && n <= 3) {
        try {
            EliminationSystem bsys =
                build_boundary_system(branch.relation(), Rational(spec.radius), ElimRoute::cross);
            auto bsamples_pos = profile_pairs(est.pos, true);
            auto bsamples_neg = profile_pairs(est.neg, true);
            bsamples_pos.insert(bsamples_pos.end(), bsamples_neg.begin(), bsamples_neg.end());
            PlaneCurve bcurve = eliminate_to_curve(bsys, ElimMethod::resultant, bsamples_pos, eopts);
            elim["boundary"] = curve_to_json(bcurve);
            elim["boundary_samples"] = bsamples_pos.size();
        } catch (const EliminationError& e) {
            elim["boundary_error"] = e.what();
        }
    }
    j["elimination"] = elim;

    // Distance exponent fit and sufficiency audit.
    std::optional<DistanceFit> dfit, gfit;
    if (zindex) {
        DistanceFitOptions dopts;
        dopts.seed = opts.seed;
        try {
            dfit = fit_distance_exponent(branch, center, *zindex, dopts);
            j["distance_fit"] = distance_fit_to_json(*dfit);
        } catch (const FitError& e) {
            j["distance_fit_error"] = e.what();
        }
        dopts.gradient_mode = true;
        try {
            gfit = fit_distance_exponent(branch, center, *zindex, dopts);
        } catch (const FitError&) {
        }
    } else {
        j["distance_fit_error"] = zero_err;
    }
    std::optional<bool> audit_pass;
    if (gfit) {
        const BoundEntry* bk = suff_rep.best();
        double k_minus_1 = BigInt(bk->denominator - 1).get_d();
        audit_pass = gfit->alpha_hat <= k_minus_1;
        j["suffdeg_audit"] = {{"k", bk->denominator.get_str()},
                              {"k_source", bk->source},
                              {"beta_hat", gfit->alpha_hat},
                              {"margin", k_minus_1 - gfit->alpha_hat},
                              {"verdict", *audit_pass ? "pass" : "fail"}};
    }

    // Flow sandwich, KL, and inequality spot checks with the fitted constants.
    Region X = Region::ball(center, branch.radius());
    std::optional<SandwichStats> sw;
    std::optional<KlCheck> kl;
    std::optional<ViolationReport> ineq;
    bool fit_usable = std::isfinite(est.rho_hat) && est.rho_hat >= 0 && est.rho_hat < 1 &&
                      std::isfinite(est.c_hat) && est.c_hat > 0;
    if (fit_usable) {
        if (zindex) {
            SandwichOptions sopts;
            sopts.starts = opts.flow_starts;
            sopts.seed = opts.seed;
            sopts.f_window = est.epsilon;
            sw = run_sandwich_checks(branch, X, est.rho_hat, est.c_hat, *zindex, sopts);
            json swj;
            swj["starts"] = sw->attempted;
            swj["applicable"] = sw->applicable;
            swj["in_u_region"] = sw->in_u_region;
            swj["lower_violations"] = sw->lower_violations;
            swj["upper_violations"] = sw->upper_violations;
            swj["worst_lower_margin"] = sw->worst_lower_margin;
            swj["worst_upper_margin"] = sw->worst_upper_margin;
            j["flow_sandwich"] = swj;
        }
        double fit_floor = est.epsilon;
        for (const std::optional<ExponentFit>* f : {&est.fit_pos, &est.fit_neg})
            if (*f) fit_floor = std::min(fit_floor, (*f)->y_min);
        kl = check_kl(branch, X, est.rho_hat, est.c_hat, opts.kl_samples, opts.seed,
                      0.9 * fit_floor, est.epsilon);
        j["kl_check"] = {{"min_value", kl->min_value},
                        {"threshold", kl->threshold},
                        {"samples", kl->samples},
                        {"level_window", {0.9 * fit_floor, est.epsilon}},
                        {"pass", kl->pass}};
        VerifyOptions vopts;
        vopts.seed = opts.seed;
        vopts.epsilon = est.epsilon;
        vopts.min_abs_f = 0.9 * fit_floor;
        ineq = verify_inequality(branch, center, std::max(est.rho_hat, 0.0), est.c_hat, vopts);
        j["inequality_check"] = violation_to_json(*ineq);
    }

    // Verdicts.
    std::vector<Verdict> verdicts;
    {
        Verdict v;
        v.name = "theorem-consistency";
        v.hard = true;
        const BoundEntry* best = rho_rep.best();
        double best_rho = best ? entry_value_double(*best) : 1.0;
        double s_exp = s_bound(n, d).get_d();
        bool rho_ok = std::isfinite(est.rho_hat) && est.rho_hat <= best_rho + 1e-9;
        bool alpha_ok = !dfit || dfit->alpha_hat <= s_exp + 1e-9;
        bool flows_ok = !sw || (sw->lower_violations == 0 && sw->upper_violations == 0);
        std::ostringstream detail;
        detail << "rho_hat=" << est.rho_hat << " vs bound=" << best_rho;
        if (dfit) detail << "; alpha_hat=" << dfit->alpha_hat << " vs S=" << s_exp;
        if (sw)
            detail << "; sandwich violations=" << (sw->lower_violations + sw->upper_violations)
                   << "/" << sw->applicable;
        v.detail = detail.str();
        v.status = (rho_ok && alpha_ok && flows_ok) ? "pass" : "fail";
        verdicts.push_back(v);
    }
    if (interior_curve && interior_curve->residual >= 0) {
        Verdict v;
        v.name = "curve-residual";
        v.hard = true;
        v.status = interior_curve->residual <= eopts.residual_tol ? "pass" : "fail";
        v.detail = "max scaled |Q(y_j, u_j)| = " + std::to_string(interior_curve->residual);
        verdicts.push_back(v);
    }
    if (interior_curve && std::isfinite(est.rho_hat)) {
        Verdict v;
        v.name = "slope-contains-fit";
        auto cands = slope_candidates(*interior_curve);
        bool hit = false;
        for (const auto& s : cands.slopes)
            if (std::abs(s.get_d() - est.rho_hat) <= 0.02) hit = true;
        v.status = hit ? "pass" : "informational";
        v.detail = hit ? "fitted exponent matches a curve slope candidate"
                       : "no slope candidate within 0.02 of the fit";
        verdicts.push_back(v);
    }
    if (kl) {
        Verdict v;
        v.name = "kl-check";
        v.status = kl->pass ? "pass" : "informational";
        v.detail = "min |grad(phi o f)| = " + std::to_string(kl->min_value) + " vs (1-rho)C = " +
                   std::to_string(kl->threshold);
        verdicts.push_back(v);
    }
    if (ineq) {
        Verdict v;
        v.name = "inequality-spot-check";
        v.status = ineq->pass ? "pass" : "informational";
        v.detail = "worst margin " + std::to_string(ineq->worst_margin);
        verdicts.push_back(v);
    }
    if (audit_pass) {
        Verdict v;
        v.name = "suffdeg-audit";
        v.status = *audit_pass ? "pass" : "fail";
        v.detail = "gradient distance exponent vs k-1";
        verdicts.push_back(v);
    }
    if (dfit && std::isfinite(est.rho_hat) && est.rho_hat < 1) {
        Verdict v;
        v.name = "distance-vs-gradient-exponent";
        double bound = 1.0 / (1.0 - est.rho_hat) + 0.1;
        v.status = dfit->alpha_hat <= bound ? "pass" : "informational";
        v.detail = "alpha_hat=" + std::to_string(dfit->alpha_hat) +
                   " vs 1/(1-rho_hat)+0.1=" + std::to_string(bound);
        verdicts.push_back(v);
    }
    j["verdicts"] = verdicts_to_json(verdicts);

    int exit_code = 0;
    for (const auto& v : verdicts)
        if (v.hard && v.status == "fail") exit_code = 1;
    return {j, exit_code};
}

}  // namespace lojex
