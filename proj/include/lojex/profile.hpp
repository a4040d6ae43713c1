#pragma once

#include "lojex/nash_branch.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lojex {

/// Per-level outcome of minimizing |grad f|^2 on the level set f = y inside
/// the closed ball Omega.
struct LevelRecord {
    double y = 0.0;
    double u = 0.0;                  // minimal |grad f|^2 found
    std::vector<double> argmin;
    int starts_used = 0;
    bool reachable = false;          // some start projected onto the level
    bool converged = false;          // first-order conditions met at the best point
    bool boundary = false;           // argmin within boundary tolerance of the sphere
    double lagrange_residual = 0.0;  // scaled |grad u - lambda grad f| (two multipliers on the sphere)
};

/// Sampled image of the per-level gradient minima: the empirical (y, u)
/// profile. Levels are sorted by |y| descending and all lie in (0, epsilon).
struct CriticalProfile {
    double epsilon = 0.0;
    std::vector<LevelRecord> levels;

    size_t converged_count() const;
};

struct ProfileOptions {
    int level_count = 12;
    int starts = 32;
    int max_iterations = 200;
    double level_tol_rel = 1e-10;   // |f - y| <= max(rel*|y|, eval noise floor)
    double lagrange_tol = 1e-6;
    double boundary_tol_rel = 1e-6;
    int sign = +1;                  // level sign: y_j = sign * eps * 2^-j
    /// When set, overrides the geometric schedule (used by curve interpolation).
    std::optional<std::vector<double>> explicit_levels;
};

/// OpenMP kernel: the (level x start) grid is embarrassingly parallel and the
/// per-level minimum is reduced in start order, so results are identical to
/// the serial reference bit for bit.
CriticalProfile sample_profile(const NashBranch& branch, std::span<const double> center,
                               double epsilon, const ProfileOptions& opts);

/// Serial reference implementation (same kernel, plain loops).
CriticalProfile sample_profile_serial(const NashBranch& branch, std::span<const double> center,
                                      double epsilon, const ProfileOptions& opts);

struct CriticalValueScan {
    std::vector<double> flagged_levels;  // nonzero levels where min |grad f| ~ 0
    double suggested_epsilon = 0.0;
    double window = 0.0;
};

/// Screen the window for nonzero critical values of f by sampling per-level
/// gradient minima on a uniform grid of levels. suggested_epsilon is half
/// the distance from 0 to the nearest flagged level (the window edge when
/// nothing is flagged).
CriticalValueScan critical_value_scan(const NashBranch& branch, std::span<const double> center,
                                      double window, int grid, int starts = 8,
                                      double grad_tol = 1e-4);

enum class FitMethod { least_squares, robust_median_slope };

struct ExponentFit {
    double rho_hat = 0.0;
    double c_hat = 0.0;       // safe constant: min sqrt(u) / |y|^rho over levels
    double c0_hat = 0.0;      // regression intercept constant
    double residual = 0.0;    // RMS deviation of 0.5*log u around the fit
    double y_min = 0.0, y_max = 0.0;
    int converged_levels = 0;
    bool negative_slope = false;
    std::string method;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fit |grad f| ~ C |f|^rho on the converged profile levels by regressing
/// 0.5*log u on log |y|. Throws FitError with fewer than 4 converged levels.
ExponentFit fit_exponent(const CriticalProfile& profile,
                         FitMethod method = FitMethod::least_squares);

/// Nearest-neighbor index over a fixed point set (kd-tree).
class PointIndex {
  public:
    explicit PointIndex(std::vector<std::vector<double>> points);
    double nearest_distance(std::span<const double> q) const;
    size_t size() const { return points_.size(); }
    const std::vector<std::vector<double>>& points() const { return points_; }
    /// Median nearest-neighbor spacing within the set (sampled).
    double spacing() const { return spacing_; }

  private:
    struct Node {
        int axis = -1;
        size_t point = 0;
        int left = -1, right = -1;
    };
    int build(std::vector<size_t>& idx, int lo, int hi, int depth);
    void search(int node, std::span<const double> q, double& best) const;

    std::vector<std::vector<double>> points_;
    std::vector<Node> nodes_;
    int root_ = -1;
    double spacing_ = 0.0;
};

struct ZeroSetOptions {
    int target_size = 10000;
    double region_fraction = 0.9;  // sample inside this fraction of the branch radius
    double f_tol = 1e-12;
    int max_iterations = 200;
};

/// Dense sample of V = f^{-1}(0) inside Omega, built by Newton descents of f
/// from a low-discrepancy grid. Throws when no zero is found.
std::vector<std::vector<double>> sample_zero_set(const NashBranch& branch,
                                                 std::span<const double> center,
                                                 const ZeroSetOptions& opts);

struct DistanceFit {
    double alpha_hat = 0.0;
    double c_hat = 0.0;
    double residual = 0.0;
    int shells_used = 0;
    size_t zero_sample_size = 0;
    double sample_spacing = 0.0;
    bool gradient_mode = false;  // fitted |grad f| instead of |f|
};

struct DistanceFitOptions {
    int shells = 12;
    int queries_per_shell = 256;
    double max_distance_fraction = 0.25;  // of the branch radius
    /// Queries stay inside this fraction of the radius; near the edge of the
    /// sampled region the nearest-neighbor distance overestimates the true
    /// distance (the zero-set sample ends there) and would poison the
    /// envelope.
    double query_radius_fraction = 0.7;
    bool gradient_mode = false;
    uint64_t seed = 0;
};

/// Fit the worst-direction exponent alpha in |f| >= C dist(x, V)^alpha by
/// regressing the per-shell lower envelope of log |f| on log dist, with
/// dist measured against the zero-set sample.
DistanceFit fit_distance_exponent(const NashBranch& branch, std::span<const double> center,
                                  const PointIndex& zero_index, const DistanceFitOptions& opts);

struct ViolationReport {
    size_t samples = 0;
    size_t violations = 0;
    double worst_margin = 0.0;  // min over samples of |grad f|/(C|f|^rho) - 1
    bool pass = true;
    std::vector<std::vector<double>> worst_points;  // capped
};

struct VerifyOptions {
    int sample_count = 4096;
    uint64_t seed = 0;
    double epsilon = 0.0;    // only |f| < epsilon is tested (0: no window)
    double min_abs_f = 0.0;  // skip |f| below this (fit validity floor)
    double rel_tol = 1e-9;
};

/// Check |grad f(x)| >= C |f(x)|^rho over uniform plus level-stratified
/// samples of the ball.
ViolationReport verify_inequality(const NashBranch& branch, std::span<const double> center,
                                  double rho, double C, const VerifyOptions& opts);
ViolationReport verify_inequality_serial(const NashBranch& branch, std::span<const double> center,
                                         double rho, double C, const VerifyOptions& opts);

/// Deterministic low-discrepancy points in the ball of the given radius
/// (prefix-stable: the first k points are the same for every larger count).
std::vector<std::vector<double>> halton_ball_points(int count, std::span<const double> center,
                                                    double radius);

}  // namespace lojex
