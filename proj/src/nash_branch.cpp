#include "lojex/nash_branch.hpp"

#include <algorithm>
#include <cmath>

namespace lojex {

NashBranch::NashBranch(Polynomial P, std::vector<double> seed_x, double seed_y, double radius)
    : P_(std::move(P)),
      n_(P_.nvars() - 1),
      seed_x_(std::move(seed_x)),
      seed_y_(seed_y),
      radius_(radius) {
    if (n_ < 1) throw std::invalid_argument("branch needs at least one x variable");
    if (static_cast<int>(seed_x_.size()) != n_) throw std::invalid_argument("seed dimension");
    if (radius_ <= 0) throw std::invalid_argument("radius must be positive");
    if (P_.is_zero() || P_.degree_in(n_) < 1)
        throw std::invalid_argument("P must be non-constant in y");

    for (int i = 0; i <= n_; ++i) p_grad_.push_back(P_.partial(i));
    for (int i = 0; i <= n_; ++i)
        for (int j = 0; j <= n_; ++j) p_hess_.push_back(p_grad_[i].partial(j));

    // Explicit fast path: P = c*y + h(x) with constant c != 0.
    if (P_.degree_in(n_) == 1) {
        auto coeffs = P_.coefficients_in(n_);
        if (coeffs[1].is_constant()) {
            fast_path_ = true;
            fast_scale_ = coeffs[1].constant_term().get_d();
            fast_h_ = coeffs[0];
        }
    }

    // Newton-polish the (possibly decimal) seed against P(x0, .).
    std::vector<double> xy(seed_x_);
    xy.push_back(seed_y_);
    double py = p_grad_[n_].eval_double(xy);
    if (std::abs(py) < 1e-14 * (1 + P_.magnitude_at(xy)))
        throw std::invalid_argument("dP/dy vanishes at the seed");
    try {
        seed_y_ = newton_solve(seed_x_, seed_y_);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("seed does not lie near a root of P(x0, .)");
    }
    xy[n_] = seed_y_;
    if (std::abs(P_.eval_double(xy)) > residual_tolerance(xy) * 1e3)
        throw std::invalid_argument("seed does not lie on P = 0");
}

int NashBranch::degree() const {
    auto d = P_.total_degree();
    if (!d) throw std::domain_error("zero polynomial");
    return *d;
}

double NashBranch::residual_tolerance(std::span<const double> xy) const {
    return 1e-13 * (1.0 + P_.magnitude_at(xy));
}

void NashBranch::fold_check(std::span<const double> xy) const {
    double py = p_grad_[n_].eval_double(xy);
    double gx = 0;
    for (int i = 0; i < n_; ++i) {
        double t = p_grad_[i].eval_double(xy);
        gx += t * t;
    }
    if (std::abs(py) <= 1e-10 * (1.0 + std::sqrt(gx)))
        throw BranchFoldError("branch fold: dP/dy below tolerance",
                              std::vector<double>(xy.begin(), xy.end()));
}

double NashBranch::newton_solve(std::span<const double> x, double y0) const {
    std::vector<double> xy(x.begin(), x.end());
    xy.push_back(y0);
    double tol = residual_tolerance(xy);
    for (int it = 0; it < 60; ++it) {
        double r = P_.eval_double(xy);
        if (std::abs(r) <= tol) return xy[n_];
        fold_check(xy);
        double py = p_grad_[n_].eval_double(xy);
        double step = r / py;
        xy[n_] -= step;
        if (!std::isfinite(xy[n_])) break;
        if (std::abs(step) <= 1e-17 * (1.0 + std::abs(xy[n_]))) {
            if (std::abs(P_.eval_double(xy)) <= tol * 8) return xy[n_];
            break;
        }
    }
    double r = P_.eval_double(xy);
    if (std::abs(r) <= tol * 8) return xy[n_];
    throw BranchDivergenceError("Newton polish did not converge");
}

double NashBranch::track_segment(std::span<const double> from_x, double from_y,
                                 std::span<const double> to_x, int steps) const {
    if (fast_path_) {
        std::vector<double> xy(to_x.begin(), to_x.end());
        xy.push_back(0.0);
        return -fast_h_.eval_double(xy) / fast_scale_;
    }
    double y = from_y;
    double t = 0.0;
    double dt = 1.0 / std::max(1, steps);
    int halvings = 0;
    std::vector<double> xt(n_);
    while (t < 1.0) {
        double tn = std::min(1.0, t + dt);
        for (int i = 0; i < n_; ++i)
            xt[i] = from_x[i] + tn * (to_x[i] - from_x[i]);
        try {
            y = newton_solve(xt, y);
            t = tn;
            if (halvings > 0 && dt < 1.0 / std::max(1, steps)) dt *= 2.0;
        } catch (const BranchDivergenceError&) {
            dt /= 2.0;
            if (++halvings > kMaxHalvings)
                throw BranchDivergenceError("continuation diverged after step halving");
        }
    }
    return y;
}

double NashBranch::eval(std::span<const double> x, int path_steps) const {
    if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("point dimension");
    if (fast_path_) {
        std::vector<double> xy(x.begin(), x.end());
        xy.push_back(0.0);
        return -fast_h_.eval_double(xy) / fast_scale_;
    }
    return track_segment(seed_x_, seed_y_, x, path_steps);
}

GradientValue NashBranch::gradient(std::span<const double> x) const {
    Cursor c(*this);
    c.move_to(x, kDefaultPathSteps);
    return c.gradient();
}

std::vector<double> NashBranch::hessian(std::span<const double> x) const {
    Cursor c(*this);
    c.move_to(x, kDefaultPathSteps);
    return c.hessian();
}

double NashBranch::partial_y_at(std::span<const double> x) const {
    std::vector<double> xy(x.begin(), x.end());
    xy.push_back(eval(x));
    return p_grad_[n_].eval_double(xy);
}

double NashBranch::eval_noise(std::span<const double> x, double y) const {
    std::vector<double> xy(x.begin(), x.end());
    xy.push_back(y);
    double mag = P_.magnitude_at(xy);
    double py = std::abs(p_grad_[n_].eval_double(xy));
    return 4e-16 * (1.0 + mag) / std::max(py, 1e-12);
}

NashBranch::Cursor::Cursor(const NashBranch& branch)
    : branch_(&branch), x_(branch.seed_x_), y_(branch.seed_y_) {}

double NashBranch::Cursor::move_to(std::span<const double> x, int path_steps) {
    if (branch_->fast_path_) {
        x_.assign(x.begin(), x.end());
        y_ = branch_->eval(x);
        return y_;
    }
    y_ = branch_->track_segment(x_, y_, x, path_steps);
    x_.assign(x.begin(), x.end());
    return y_;
}

GradientValue NashBranch::Cursor::gradient() const {
    const NashBranch& b = *branch_;
    std::vector<double> xy(x_);
    xy.push_back(y_);
    GradientValue g;
    g.value = y_;
    g.grad.resize(b.n_);
    if (b.fast_path_) {
        for (int i = 0; i < b.n_; ++i)
            g.grad[i] = -b.p_grad_[i].eval_double(xy) / b.fast_scale_;
    } else {
        b.fold_check(xy);
        double py = b.p_grad_[b.n_].eval_double(xy);
        for (int i = 0; i < b.n_; ++i)
            g.grad[i] = -b.p_grad_[i].eval_double(xy) / py;
    }
    g.norm_sq = 0;
    for (double t : g.grad) g.norm_sq += t * t;
    return g;
}

std::vector<double> NashBranch::Cursor::hessian() const {
    const NashBranch& b = *branch_;
    const int n = b.n_;
    std::vector<double> xy(x_);
    xy.push_back(y_);
    if (!b.fast_path_) b.fold_check(xy);
    double py = b.p_grad_[n].eval_double(xy);

    std::vector<double> fgrad(n);
    for (int i = 0; i < n; ++i) fgrad[i] = -b.p_grad_[i].eval_double(xy) / py;

    auto p2 = [&](int i, int j) { return b.p_hess_[i * (n + 1) + j].eval_double(xy); };

    // f_ij from P(x, f(x)) = 0:
    //   f_ij = -[(P_ij + P_iy f_j) P_y - P_i (P_yj + P_yy f_j)] / P_y^2
    std::vector<double> h(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        double pi = b.p_grad_[i].eval_double(xy);
        for (int j = 0; j < n; ++j) {
            double dpi = p2(i, j) + p2(i, n) * fgrad[j];
            double dpy = p2(n, j) + p2(n, n) * fgrad[j];
            h[static_cast<size_t>(i) * n + j] = -(dpi * py - pi * dpy) / (py * py);
        }
    }
    // Symmetrize away roundoff skew.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double m = 0.5 * (h[static_cast<size_t>(i) * n + j] + h[static_cast<size_t>(j) * n + i]);
            h[static_cast<size_t>(i) * n + j] = m;
            h[static_cast<size_t>(j) * n + i] = m;
        }
    return h;
}

}  // namespace lojex
