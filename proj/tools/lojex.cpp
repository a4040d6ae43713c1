// lojex: exponent bounds, plane-curve elimination, empirical exponent fits,
// and gradient-trajectory checks for polynomial and Nash functions.
#include "lojex/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using lojex::json;

int emit(const json& doc) {
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int emit_error(const std::exception& e, const char* type) {
    json doc;
    doc["schema"] = 1;
    doc["error"] = {{"type", type}, {"message", e.what()}};
    std::cout << doc.dump(2) << "\n";
    return 1;
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.empty()) throw CLI::ValidationError("point", "empty coordinate list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lojasiewicz gradient-inequality toolkit for polynomial and Nash functions"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    int threads = 0;
    app.add_option("--seed", seed, "seed for all randomized sampling (default 0)");
    app.add_option("--threads", threads, "cap OpenMP worker count (0 = library default)");
    // Global options may appear after the subcommand name.
    app.fallthrough();

    // bounds
    auto* cmd_bounds = app.add_subcommand("bounds", "closed-form exponent bounds for (n, d)");
    int b_n = 0, b_d = 0;
    double b_user_rho = -1;
    lojex::Assumptions b_assume;
    cmd_bounds->add_option("--n", b_n, "ambient dimension")->required();
    cmd_bounds->add_option("--d", b_d, "degree of the defining polynomial")->required();
    cmd_bounds->add_flag("--partial-y-nonzero", b_assume.partial_y_nonzero,
                         "dP/dy does not vanish along the branch");
    cmd_bounds->add_flag("--polynomial", b_assume.polynomial_f, "f is a polynomial");
    cmd_bounds->add_flag("--rational", b_assume.rational_f, "f is a rational function");
    cmd_bounds->add_flag("--isolated-zero", b_assume.isolated_zero, "the zero of f is isolated");
    cmd_bounds->add_option("--rho", b_user_rho, "evaluate the 1/(1-rho) exponent for this rho");

    // suffdeg
    auto* cmd_suff = app.add_subcommand("suffdeg", "jet sufficiency degree (formula or audit)");
    int s_n = 0, s_d = 0;
    std::string s_branch;
    std::string s_k;
    lojex::Assumptions s_assume;
    cmd_suff->add_option("--n", s_n, "ambient dimension");
    cmd_suff->add_option("--d", s_d, "degree");
    cmd_suff->add_option("--branch", s_branch, "branch JSON file: audit the bound empirically");
    cmd_suff->add_option("--k", s_k, "jet order to audit (default: best formula value)");
    cmd_suff->add_flag("--partial-y-nonzero", s_assume.partial_y_nonzero, "");
    cmd_suff->add_flag("--polynomial", s_assume.polynomial_f, "");
    cmd_suff->add_flag("--rational", s_assume.rational_f, "");
    cmd_suff->add_flag("--isolated-zero", s_assume.isolated_zero, "");

    // estimate
    auto* cmd_est = app.add_subcommand("estimate", "sample the critical profile and fit (rho, C)");
    std::string e_branch, e_center;
    double e_eps = 0;
    int e_levels = 12, e_starts = 32;
    bool e_csv = false;
    cmd_est->add_option("--branch", e_branch, "branch JSON file")->required();
    cmd_est->add_option("--center", e_center, "center a as comma list (default: branch seed)");
    cmd_est->add_option("--epsilon", e_eps, "level window (default: critical-value scan)");
    cmd_est->add_option("--levels", e_levels, "level count per sign");
    cmd_est->add_option("--starts", e_starts, "multi-start count per level");
    cmd_est->add_flag("--csv", e_csv, "emit (log|y|, log sqrt u) plot data instead of JSON");

    // eliminate
    auto* cmd_elim = app.add_subcommand("eliminate", "eliminate x to the plane curve Q(y, u)");
    std::string el_branch, el_case = "I", el_method = "resultant", el_route = "k";
    double el_r = 0;
    int el_cap = 12, el_levels = 12, el_starts = 32;
    cmd_elim->add_option("--branch", el_branch, "branch JSON file")->required();
    cmd_elim->add_option("--case", el_case, "I (interior) or II (boundary)")
        ->check(CLI::IsMember({"I", "II"}));
    cmd_elim->add_option("--r", el_r, "sphere radius for case II");
    cmd_elim->add_option("--method", el_method, "resultant | interpolate")
        ->check(CLI::IsMember({"resultant", "interpolate"}));
    cmd_elim->add_option("--route", el_route, "k (cross constraints) | tz (tangent variables)")
        ->check(CLI::IsMember({"k", "tz"}));
    cmd_elim->add_option("--cap", el_cap, "interpolation degree cap");
    cmd_elim->add_option("--levels", el_levels, "profile level count for pruning samples");
    cmd_elim->add_option("--starts", el_starts, "multi-start count per level");

    // flow
    auto* cmd_flow = app.add_subcommand("flow", "integrate the normalized gradient flow");
    std::string f_branch, f_start, f_check, f_trace;
    double f_tol = 1e-8;
    cmd_flow->add_option("--branch", f_branch, "branch JSON file")->required();
    cmd_flow->add_option("--start", f_start, "start point as comma list")->required();
    cmd_flow->add_option("--tol", f_tol, "stop when |f| falls below this level");
    cmd_flow->add_option("--check", f_check, "rho,C: verify the trajectory-length sandwich");
    cmd_flow->add_option("--trace", f_trace, "write the polyline to this CSV file");

    // report
    auto* cmd_rep = app.add_subcommand("report", "full pipeline with combined verdicts");
    std::string r_branch;
    lojex::ReportOptions ropts;
    cmd_rep->add_option("--branch", r_branch, "branch JSON file")->required();
    cmd_rep->add_option("--levels", ropts.levels, "profile level count per sign");
    cmd_rep->add_option("--starts", ropts.starts, "multi-start count per level");
    cmd_rep->add_option("--zero-sample", ropts.zero_sample, "zero-set sample size");
    cmd_rep->add_option("--flow-starts", ropts.flow_starts, "Monte-Carlo flow start count");
    cmd_rep->add_option("--cap", ropts.degree_cap, "interpolation degree cap");
    cmd_rep->add_option("--kl-samples", ropts.kl_samples, "sample count for the KL check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // usage error
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (cmd_bounds->parsed()) {
            std::optional<lojex::Rational> rho;
            if (b_user_rho >= 0) rho = lojex::Rational(b_user_rho);
            return emit(lojex::run_bounds_cmd(b_n, b_d, b_assume, rho));
        }
        if (cmd_suff->parsed()) {
            if (!s_branch.empty()) {
                std::optional<lojex::BigInt> k;
                if (!s_k.empty()) k = lojex::BigInt(s_k, 10);
                return emit(lojex::run_suffdeg_audit_cmd(s_branch, k, seed));
            }
            if (s_n <= 0 || s_d <= 0)
                throw CLI::ValidationError("suffdeg", "--n and --d (or --branch) are required");
            return emit(lojex::run_suffdeg_formula_cmd(s_n, s_d, s_assume));
        }
        if (cmd_est->parsed()) {
            std::optional<std::vector<double>> center;
            if (!e_center.empty()) center = parse_point(e_center);
            std::optional<double> eps;
            if (e_eps > 0) eps = e_eps;
            json doc = lojex::run_estimate_cmd(e_branch, center, eps, e_levels, e_starts, seed);
            if (e_csv) {
                std::cout << "log_abs_y,log_sqrt_u\n";
                for (const char* key : {"positive", "negative"}) {
                    for (const auto& lvl : doc[key]["levels"]) {
                        if (!lvl["converged"].get<bool>() || lvl["u"].is_null()) continue;
                        double y = lvl["y"].get<double>(), u = lvl["u"].get<double>();
                        if (u <= 0) continue;
                        std::cout << std::log(std::abs(y)) << "," << 0.5 * std::log(u) << "\n";
                    }
                }
                return 0;
            }
            return emit(doc);
        }
        if (cmd_elim->parsed()) {
            auto kase = el_case == "I" ? lojex::SystemCase::interior : lojex::SystemCase::boundary;
            auto method = el_method == "resultant" ? lojex::ElimMethod::resultant
                                                   : lojex::ElimMethod::interpolate;
            auto route = el_route == "k" ? lojex::ElimRoute::cross : lojex::ElimRoute::tangent;
            std::optional<double> r;
            if (cmd_elim->count("--r") > 0) r = el_r;
            if (kase == lojex::SystemCase::boundary && !r)
                throw CLI::ValidationError("--case II", "requires --r RADIUS");
            return emit(lojex::run_eliminate_cmd(el_branch, kase, r, method, route, el_cap,
                                                 el_levels, el_starts, seed));
        }
        if (cmd_flow->parsed()) {
            std::vector<double> start = parse_point(f_start);
            std::optional<std::pair<double, double>> check;
            if (!f_check.empty()) {
                auto vals = parse_point(f_check);
                if (vals.size() != 2) throw CLI::ValidationError("--check", "expected rho,C");
                check = std::make_pair(vals[0], vals[1]);
            }
            return emit(lojex::run_flow_cmd(f_branch, start, f_tol, check, f_trace, seed));
        }
        if (cmd_rep->parsed()) {
            ropts.seed = seed;
            ropts.threads = threads;
            lojex::ReportResult res = lojex::run_report(r_branch, ropts);
            std::cout << res.doc.dump(2) << "\n";
            return res.exit_code;
        }
    } catch (const CLI::Error& e) {
        app.exit(e);
        return 2;  // usage error
    } catch (const lojex::ParseError& e) {
        return emit_error(e, "parse_error");
    } catch (const lojex::EliminationError& e) {
        return emit_error(e, "elimination_error");
    } catch (const lojex::FitError& e) {
        return emit_error(e, "fit_error");
    } catch (const lojex::BranchFoldError& e) {
        return emit_error(e, "branch_fold");
    } catch (const std::invalid_argument& e) {
        return emit_error(e, "invalid_argument");
    } catch (const std::domain_error& e) {
        return emit_error(e, "domain_error");
    } catch (const std::exception& e) {
        return emit_error(e, "error");
    }
    return 2;
}
