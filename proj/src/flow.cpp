#include "lojex/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lojex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Rng {
    uint64_t state;
    double next01() {
        state = mix64(state);
        return (state >> 11) * 0x1.0p-53;
    }
};

std::vector<double> ball_sample(Rng& rng, std::span<const double> center, double radius) {
    const int n = static_cast<int>(center.size());
    std::vector<double> d(n);
    double s = 0;
    for (int i = 0; i < n; ++i) {
        double u1 = std::max(rng.next01(), 1e-300), u2 = rng.next01();
        d[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        s += d[i] * d[i];
    }
    s = std::max(std::sqrt(s), 1e-300);
    double r = radius * std::pow(rng.next01(), 1.0 / n);
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) p[i] = center[i] + r * d[i] / s;
    return p;
}

}  // namespace

Region Region::ball(std::vector<double> center, double radius) {
    Region r;
    r.kind_ = Kind::ball;
    r.center_ = std::move(center);
    r.radius_ = radius;
    return r;
}

Region Region::box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box corner dimensions differ");
    Region r;
    r.kind_ = Kind::box;
    r.lo_ = std::move(lo);
    r.hi_ = std::move(hi);
    return r;
}

int Region::dim() const {
    return kind_ == Kind::ball ? static_cast<int>(center_.size()) : static_cast<int>(lo_.size());
}

bool Region::contains(std::span<const double> x) const { return interior_distance(x) >= 0.0; }

double Region::interior_distance(std::span<const double> x) const {
    if (kind_ == Kind::ball) {
        double d = 0;
        for (size_t i = 0; i < x.size(); ++i) d += (x[i] - center_[i]) * (x[i] - center_[i]);
        return radius_ - std::sqrt(d);
    }
    double best = kInf;
    for (size_t i = 0; i < x.size(); ++i) {
        best = std::min(best, x[i] - lo_[i]);
        best = std::min(best, hi_[i] - x[i]);
    }
    return best;
}

const char* flow_terminal_name(FlowTerminal t) {
    switch (t) {
        case FlowTerminal::reached_zero_level: return "reached_zero_level";
        case FlowTerminal::left_domain: return "left_domain";
        case FlowTerminal::step_underflow: return "step_underflow";
        case FlowTerminal::max_length_exceeded: return "max_length_exceeded";
    }
    return "unknown";
}

Trajectory flow(const NashBranch& branch, std::span<const double> x0, const Region& X,
                const FlowOptions& opts) {
    const int n = branch.dim();
    if (static_cast<int>(x0.size()) != n) throw std::invalid_argument("start dimension");
    if (!X.contains(x0)) throw std::invalid_argument("start outside the region");

    NashBranch::Cursor cursor(branch);
    std::vector<double> x(x0.begin(), x0.end());
    double f = cursor.move_to(x);
    double noise = branch.eval_noise(x, f);
    if (std::abs(f) <= std::max(opts.stop_tol_f, 4.0 * noise))
        throw std::invalid_argument("start on the zero set");
    GradientValue g = cursor.gradient();
    if (g.norm_sq <= 1e-28) throw std::invalid_argument("start at a critical point");

    const double sign = f > 0 ? 1.0 : -1.0;  // frozen: |f| decreases, no sign change

    Trajectory traj;
    traj.start_f = f;
    traj.points.push_back(x);
    traj.f_values.push_back(f);

    // Unit-speed field evaluated by a scratch cursor so rejected RK stages
    // never disturb the committed state.
    auto field_at = [&](const std::vector<double>& p, NashBranch::Cursor& scratch,
                        std::vector<double>& out) -> bool {
        try {
            scratch.move_to(p);
            GradientValue gv = scratch.gradient();
            double nn = std::sqrt(gv.norm_sq);
            if (nn <= 1e-300) return false;
            out.resize(p.size());
            for (size_t i = 0; i < p.size(); ++i) out[i] = -sign * gv.grad[i] / nn;
            return true;
        } catch (const std::runtime_error&) {
            return false;
        }
    };

    int steps = 0;
    int since_record = 0;
    std::vector<double> k1, k2, k3, k4, xt(n), xn(n);
    while (steps++ < opts.max_steps) {
        double gnorm = std::sqrt(g.norm_sq);
        double h = std::min(opts.max_step, opts.kappa * std::abs(f) / std::max(gnorm, 1e-300));
        h = std::min(h, opts.max_length - traj.arc_length + 1e-30);
        bool stepped = false;
        while (h >= opts.min_step) {
            NashBranch::Cursor c1 = cursor;
            if (!field_at(x, c1, k1)) break;
            for (int i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * h * k1[i];
            NashBranch::Cursor c2 = cursor;
            if (!field_at(xt, c2, k2)) { h *= 0.5; continue; }
            for (int i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * h * k2[i];
            NashBranch::Cursor c3 = cursor;
            if (!field_at(xt, c3, k3)) { h *= 0.5; continue; }
            for (int i = 0; i < n; ++i) xt[i] = x[i] + h * k3[i];
            NashBranch::Cursor c4 = cursor;
            if (!field_at(xt, c4, k4)) { h *= 0.5; continue; }
            for (int i = 0; i < n; ++i)
                xn[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            NashBranch::Cursor cn = cursor;
            double fn;
            try {
                fn = cn.move_to(xn);
            } catch (const std::runtime_error&) {
                h *= 0.5;
                continue;
            }
            if (std::abs(fn) >= std::abs(f) || fn * sign < 0) {
                // A step must strictly descend |f| without crossing V.
                h *= 0.5;
                continue;
            }
            double seg = 0;
            for (int i = 0; i < n; ++i) seg += (xn[i] - x[i]) * (xn[i] - x[i]);
            seg = std::sqrt(seg);

            if (!X.contains(xn)) {
                traj.terminal = FlowTerminal::left_domain;
                traj.points.push_back(xn);
                traj.f_values.push_back(fn);
                traj.arc_length += seg;
                return traj;
            }
            x = xn;
            cursor = cn;
            f = fn;
            try {
                g = cursor.gradient();
            } catch (const std::runtime_error&) {
                traj.terminal = FlowTerminal::step_underflow;
                traj.points.push_back(x);
                traj.f_values.push_back(f);
                traj.arc_length += seg;
                return traj;
            }
            traj.arc_length += seg;
            stepped = true;
            if (++since_record >= opts.record_every || std::abs(f) <= opts.stop_tol_f) {
                traj.points.push_back(x);
                traj.f_values.push_back(f);
                since_record = 0;
            }
            break;
        }
        if (!stepped) {
            traj.terminal = FlowTerminal::step_underflow;
            break;
        }
        if (std::abs(f) <= opts.stop_tol_f) {
            traj.terminal = FlowTerminal::reached_zero_level;
            break;
        }
        if (traj.arc_length >= opts.max_length) {
            traj.terminal = FlowTerminal::max_length_exceeded;
            break;
        }
    }
    if (traj.points.back() != x) {
        traj.points.push_back(x);
        traj.f_values.push_back(f);
    }
    return traj;
}

SandwichCheck check_length_bound(const Trajectory& traj, double rho, double C,
                                 std::optional<double> dist_to_zero_set,
                                 std::optional<double> dist_end_to_zero_set, double slack) {
    SandwichCheck out;
    out.applicable = traj.terminal == FlowTerminal::reached_zero_level;
    if (!out.applicable) return out;
    double upper = std::pow(std::abs(traj.start_f), 1.0 - rho) / ((1.0 - rho) * C);
    out.upper_ok = traj.arc_length <= upper * (1.0 + slack);
    out.upper_margin = upper / std::max(traj.arc_length, 1e-300) - 1.0;
    out.upper_tightness = std::abs(upper - traj.arc_length) / std::max(upper, 1e-300);
    if (dist_to_zero_set) {
        // The numeric trajectory stops at the level set |f| = stop_tol, short
        // of V; dist(x0, V) <= length + dist(end, V) still holds exactly.
        double reach = traj.arc_length + dist_end_to_zero_set.value_or(0.0);
        out.lower_ok = *dist_to_zero_set <= reach * (1.0 + slack);
        out.lower_margin = reach / std::max(*dist_to_zero_set, 1e-300) - 1.0;
    } else {
        out.lower_ok = true;
        out.lower_margin = 0.0;
    }
    return out;
}

bool in_u_region(const NashBranch& branch, std::span<const double> x, const Region& X, double rho,
                 double C) {
    double d = X.interior_distance(x);
    if (d <= 0) return false;
    double f = branch.eval(x);
    return std::pow(std::abs(f), 1.0 - rho) / (C * (1.0 - rho)) < d;
}

KlCheck check_kl(const NashBranch& branch, const Region& X, double rho, double C,
                 int sample_count, uint64_t seed, double f_floor, double f_ceiling) {
    if (rho < 0 || rho >= 1) throw std::domain_error("rho must lie in [0, 1)");
    KlCheck out;
    out.threshold = (1.0 - rho) * C;
    double min_value = kInf;
    size_t used = 0;
    std::vector<double> center(branch.seed_x());
#pragma omp parallel for schedule(static) reduction(min : min_value) reduction(+ : used)
    for (int i = 0; i < sample_count; ++i) {
        Rng rng{mix64(seed ^ (0x51ebull + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(i)))};
        std::vector<double> p = ball_sample(rng, center, branch.radius());
        if (!X.contains(p)) continue;
        double f, value;
        try {
            NashBranch::Cursor cursor(branch);
            f = cursor.move_to(p);
            if (std::abs(f) <= f_floor) continue;
            if (f_ceiling > 0 && std::abs(f) >= f_ceiling) continue;
            GradientValue g = cursor.gradient();
            // |grad(phi o f)| = (1-rho) |f|^(-rho) |grad f|
            value = (1.0 - rho) * std::pow(std::abs(f), -rho) * std::sqrt(g.norm_sq);
        } catch (const std::runtime_error&) {
            continue;
        }
        if (value < min_value) min_value = value;
        ++used;
    }
    out.samples = used;
    out.min_value = std::isfinite(min_value) ? min_value : 0.0;
    out.pass = used > 0 && out.min_value >= out.threshold * (1.0 - 0.01);
    return out;
}

namespace {

struct StartOutcome {
    bool used = false;
    bool in_u = false;
    SandwichCheck check;
};

StartOutcome sandwich_one(const NashBranch& branch, const Region& X, double rho, double C,
                          const PointIndex& zero_index, const SandwichOptions& opts, int index) {
    StartOutcome out;
    Rng rng{mix64(opts.seed ^ (0xF10Bull + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(index)))};
    std::vector<double> center(branch.seed_x());
    std::vector<double> x0 = ball_sample(rng, center, 0.95 * branch.radius());
    double f0;
    try {
        f0 = branch.eval(x0);
    } catch (const std::runtime_error&) {
        return out;
    }
    if (std::abs(f0) <= opts.flow.stop_tol_f * 8) return out;
    if (opts.f_window > 0 && std::abs(f0) >= opts.f_window) return out;
    out.in_u = in_u_region(branch, x0, X, rho, C);
    if (opts.require_in_u && !out.in_u) return out;
    Trajectory traj;
    try {
        traj = flow(branch, x0, X, opts.flow);
    } catch (const std::invalid_argument&) {
        return out;
    } catch (const std::runtime_error&) {
        return out;
    }
    double d = zero_index.nearest_distance(x0);
    std::optional<double> d_end;
    if (!traj.points.empty()) d_end = zero_index.nearest_distance(traj.points.back());
    out.check = check_length_bound(traj, rho, C, d, d_end, opts.slack);
    out.used = true;
    return out;
}

SandwichStats assemble_sandwich(std::span<const StartOutcome> outs) {
    SandwichStats stats;
    stats.worst_lower_margin = kInf;
    stats.worst_upper_margin = kInf;
    for (const auto& o : outs) {
        ++stats.attempted;
        if (o.in_u) ++stats.in_u_region;
        if (!o.used || !o.check.applicable) continue;
        ++stats.applicable;
        if (!o.check.lower_ok) ++stats.lower_violations;
        if (!o.check.upper_ok) ++stats.upper_violations;
        stats.worst_lower_margin = std::min(stats.worst_lower_margin, o.check.lower_margin);
        stats.worst_upper_margin = std::min(stats.worst_upper_margin, o.check.upper_margin);
        stats.max_upper_tightness = std::max(stats.max_upper_tightness, o.check.upper_tightness);
    }
    if (!std::isfinite(stats.worst_lower_margin)) stats.worst_lower_margin = 0.0;
    if (!std::isfinite(stats.worst_upper_margin)) stats.worst_upper_margin = 0.0;
    return stats;
}

}  // namespace

SandwichStats run_sandwich_checks(const NashBranch& branch, const Region& X, double rho, double C,
                                  const PointIndex& zero_index, const SandwichOptions& opts) {
    std::vector<StartOutcome> outs(static_cast<size_t>(opts.starts));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < opts.starts; ++i)
        outs[i] = sandwich_one(branch, X, rho, C, zero_index, opts, i);
    return assemble_sandwich(outs);
}

SandwichStats run_sandwich_checks_serial(const NashBranch& branch, const Region& X, double rho,
                                         double C, const PointIndex& zero_index,
                                         const SandwichOptions& opts) {
    std::vector<StartOutcome> outs(static_cast<size_t>(opts.starts));
    for (int i = 0; i < opts.starts; ++i)
        outs[i] = sandwich_one(branch, X, rho, C, zero_index, opts, i);
    return assemble_sandwich(outs);
}

}  // namespace lojex
