#pragma once

#include "lojex/polynomial.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lojex {

/// Thrown when |dP/dy| falls below the fold tolerance along a tracked path:
/// the implicit branch is not single-valued past this point.
struct BranchFoldError : std::runtime_error {
    BranchFoldError(const std::string& msg, std::vector<double> at)
        : std::runtime_error(msg), where(std::move(at)) {}
    std::vector<double> where;
};

struct BranchDivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Value, gradient, and squared gradient norm of the branch function at a
/// point; norm_sq is the u-coordinate paired with y = value.
struct GradientValue {
    double value = 0.0;
    std::vector<double> grad;
    double norm_sq = 0.0;
};

/// One branch of P(x, y) = 0 through a seed point, evaluated by continuation
/// from the seed and differentiated implicitly. Variables of P are
/// x1..xn followed by y (index n). Immutable after construction; all
/// evaluation entry points are pure.
class NashBranch {
  public:
    static constexpr int kDefaultPathSteps = 64;
    static constexpr int kMaxHalvings = 20;

    NashBranch(Polynomial P, std::vector<double> seed_x, double seed_y, double radius);

    int dim() const { return n_; }
    double radius() const { return radius_; }
    const std::vector<double>& seed_x() const { return seed_x_; }
    double seed_y() const { return seed_y_; }
    const Polynomial& relation() const { return P_; }
    /// Total degree of P; the degree of the branch function at the seed.
    int degree() const;
    /// True when P is linear in y with constant leading coefficient, so the
    /// branch is the explicit polynomial -h(x)/c.
    bool polynomial_form() const { return fast_path_; }

    double eval(std::span<const double> x, int path_steps = kDefaultPathSteps) const;
    GradientValue gradient(std::span<const double> x) const;
    /// Row-major n x n Hessian of the branch function.
    std::vector<double> hessian(std::span<const double> x) const;
    /// dP/dy at the branch point over x (fold-distance evidence).
    double partial_y_at(std::span<const double> x) const;
    /// Estimated absolute floating-point noise of eval() near (x, y):
    /// the cancellation scale of P divided by |dP/dy|.
    double eval_noise(std::span<const double> x, double y) const;

    /// Tracked evaluation state for a sequence of nearby queries. Confined
    /// to one call chain; never shared across threads.
    class Cursor {
      public:
        explicit Cursor(const NashBranch& branch);
        /// Move to x, tracking the root from the current position; returns f(x).
        double move_to(std::span<const double> x, int path_steps = 8);
        double value() const { return y_; }
        GradientValue gradient() const;
        std::vector<double> hessian() const;
        const std::vector<double>& position() const { return x_; }

      private:
        const NashBranch* branch_;
        std::vector<double> x_;
        double y_;
    };

    // Internal solver shared by eval and Cursor.
    double track_segment(std::span<const double> from_x, double from_y,
                         std::span<const double> to_x, int steps) const;

  private:
    double newton_solve(std::span<const double> x, double y0) const;
    double residual_tolerance(std::span<const double> xy) const;
    void fold_check(std::span<const double> xy) const;

    Polynomial P_;
    int n_;
    std::vector<double> seed_x_;
    double seed_y_;
    double radius_;
    bool fast_path_ = false;
    double fast_scale_ = 1.0;          // c in P = c*y + h(x)
    Polynomial fast_h_;                // h(x) embedded in n+1 vars
    std::vector<Polynomial> p_grad_;   // dP/dx1..dP/dxn, dP/dy (index n)
    std::vector<Polynomial> p_hess_;   // row-major (n+1)x(n+1) second partials
};

}  // namespace lojex
