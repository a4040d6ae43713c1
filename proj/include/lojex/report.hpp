#pragma once

#include "lojex/bounds.hpp"
#include "lojex/elimination.hpp"
#include "lojex/flow.hpp"
#include "lojex/nash_branch.hpp"
#include "lojex/profile.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace lojex {

using json = nlohmann::ordered_json;

/// Branch specification file:
/// { "P": <polynomial text>, "vars": n, "seed_x": [...], "seed_y": v, "radius": r }
/// Variables of P are named x1..xn and y.
struct BranchSpec {
    std::string p_text;
    int n = 0;
    std::vector<double> seed_x;
    double seed_y = 0;
    double radius = 1;
};
BranchSpec branch_spec_from_json(const json& doc);
NashBranch branch_from_spec(const BranchSpec& spec);
NashBranch branch_from_file(const std::string& path, BranchSpec* spec_out = nullptr);

std::string rational_str(const Rational& r);
/// "1 - 1/N" (or "0" when N == 1) for a bound of the form 1 - 1/N.
std::string one_minus_inverse_str(const BigInt& denominator);

json bounds_to_json(const BoundReport& rho, const BoundReport& suff, const BoundReport& dist,
                    const PriorComparison& prior);
json curve_to_json(const PlaneCurve& curve);
json profile_to_json(const CriticalProfile& profile);
json fit_to_json(const ExponentFit& fit);
json distance_fit_to_json(const DistanceFit& fit);
json trajectory_to_json(const Trajectory& traj);
json violation_to_json(const ViolationReport& rep);

struct ReportOptions {
    uint64_t seed = 0;
    int threads = 0;
    int levels = 12;
    int starts = 32;
    int scan_grid = 32;
    double scan_window = 0.0;  // 0: auto from the sampled range of f
    int zero_sample = 4096;
    int flow_starts = 40;
    int kl_samples = 10000;
    int degree_cap = 12;
    bool boundary_case = true;
};

struct ReportResult {
    json doc;
    int exit_code = 0;
};

/// Full pipeline: scan, profile both signs, fit, bounds, elimination (both
/// methods when feasible), distance fit, sufficiency audit, flow and KL
/// checks, verdict assembly. Exit code 1 when a hard verdict fails.
ReportResult run_report(const std::string& branch_path, const ReportOptions& opts);

// Subcommand bodies (the CLI front end parses flags and dispatches here).
json run_bounds_cmd(int n, int d, const Assumptions& a, std::optional<Rational> user_rho);
json run_suffdeg_formula_cmd(int n, int d, const Assumptions& a);
json run_suffdeg_audit_cmd(const std::string& branch_path, std::optional<BigInt> k, uint64_t seed);
json run_estimate_cmd(const std::string& branch_path, std::optional<std::vector<double>> center,
                      std::optional<double> epsilon, int levels, int starts, uint64_t seed);
json run_eliminate_cmd(const std::string& branch_path, SystemCase kase, std::optional<double> r,
                       ElimMethod method, ElimRoute route, int cap, int levels, int starts,
                       uint64_t seed);
json run_flow_cmd(const std::string& branch_path, const std::vector<double>& start,
                  double stop_tol, std::optional<std::pair<double, double>> check_rho_c,
                  const std::string& trace_path, uint64_t seed);

}  // namespace lojex
