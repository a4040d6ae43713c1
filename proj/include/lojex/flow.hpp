#pragma once

#include "lojex/nash_branch.hpp"
#include "lojex/profile.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lojex {

/// Ball or axis-aligned box region with a closed-form distance to the
/// complement.
class Region {
  public:
    static Region ball(std::vector<double> center, double radius);
    static Region box(std::vector<double> lo, std::vector<double> hi);

    bool contains(std::span<const double> x) const;
    /// Distance from x to the complement of the region (<= 0 outside).
    double interior_distance(std::span<const double> x) const;
    int dim() const;

  private:
    enum class Kind { ball, box } kind_ = Kind::ball;
    std::vector<double> center_, lo_, hi_;
    double radius_ = 0;
};

enum class FlowTerminal { reached_zero_level, left_domain, step_underflow, max_length_exceeded };

const char* flow_terminal_name(FlowTerminal t);

/// Polyline trajectory of the unit-speed descent field
/// H = -sign(f) grad f / |grad f|, with |f| strictly decreasing along it.
struct Trajectory {
    std::vector<std::vector<double>> points;
    std::vector<double> f_values;
    double arc_length = 0.0;
    FlowTerminal terminal = FlowTerminal::step_underflow;
    double start_f = 0.0;
};

struct FlowOptions {
    double stop_tol_f = 1e-8;
    double max_length = 100.0;
    double kappa = 0.1;      // step cap kappa*|f|/|grad f| bounds the level decrement
    double max_step = 0.01;
    double min_step = 1e-14;
    int max_steps = 200000;
    int record_every = 1;    // keep every k-th point (endpoints always kept)
};

/// Integrate the normalized gradient flow from x0 until |f| <= stop_tol_f,
/// the trajectory leaves X, or the arc length exceeds max_length. RK4 with
/// adaptive step; a step that fails to decrease |f| is halved.
Trajectory flow(const NashBranch& branch, std::span<const double> x0, const Region& X,
                const FlowOptions& opts = {});

/// Trajectory-length sandwich: dist(x0, V) <= length <= |f(x0)|^(1-rho) / ((1-rho) C).
struct SandwichCheck {
    bool applicable = false;  // trajectory reached the stop level
    bool lower_ok = false;
    bool upper_ok = false;
    double lower_margin = 0.0;  // length / dist - 1
    double upper_margin = 0.0;  // upper / length - 1
    double upper_tightness = 0.0;  // |upper - length| / upper
};

/// dist_end_to_zero_set compensates for stopping at |f| = stop_tol short of
/// V: dist(x0, V) <= length + dist(end, V) by the triangle inequality.
SandwichCheck check_length_bound(const Trajectory& traj, double rho, double C,
                                 std::optional<double> dist_to_zero_set,
                                 std::optional<double> dist_end_to_zero_set = std::nullopt,
                                 double slack = 1e-3);

/// Membership in U_{X,f}: |f(x)|^(1-rho) / (C (1-rho)) < dist(x, complement of X).
bool in_u_region(const NashBranch& branch, std::span<const double> x, const Region& X, double rho,
                 double C);

struct KlCheck {
    double min_value = 0.0;  // min over samples of |grad (phi o f)|
    double threshold = 0.0;  // (1 - rho) C
    size_t samples = 0;
    bool pass = false;
};

/// Reparametrized-gradient lower bound: |grad(phi o f)(x)| >= (1-rho) C with
/// phi(t) = |t|^(1-rho), checked over uniform samples of X off V. When
/// f_ceiling > 0 only |f| < f_ceiling is sampled (empirically fitted
/// constants are claimed only inside their level window).
KlCheck check_kl(const NashBranch& branch, const Region& X, double rho, double C,
                 int sample_count, uint64_t seed, double f_floor = 1e-12,
                 double f_ceiling = 0.0);

/// Monte-Carlo sandwich harness over many flow starts (OpenMP kernel with a
/// serial reference twin).
struct SandwichStats {
    int attempted = 0;
    int applicable = 0;
    int in_u_region = 0;
    int lower_violations = 0;
    int upper_violations = 0;
    double worst_lower_margin = 0.0;
    double worst_upper_margin = 0.0;
    double max_upper_tightness = 0.0;
};

struct SandwichOptions {
    int starts = 100;
    uint64_t seed = 0;
    double slack = 1e-3;
    bool require_in_u = true;   // skip starts outside U_{X,f}
    double f_window = 0.0;      // require |f(x0)| < window when > 0
    FlowOptions flow;
};

SandwichStats run_sandwich_checks(const NashBranch& branch, const Region& X, double rho, double C,
                                  const PointIndex& zero_index, const SandwichOptions& opts);
SandwichStats run_sandwich_checks_serial(const NashBranch& branch, const Region& X, double rho,
                                         double C, const PointIndex& zero_index,
                                         const SandwichOptions& opts);

}  // namespace lojex
