#include "lojex/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lojex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    double next01() {
        state = splitmix64(state);
        return (state >> 11) * 0x1.0p-53;
    }
    // Marsaglia polar method would branch unpredictably; Box-Muller is fine here.
    void gaussian_pair(double& a, double& b) {
        double u1 = std::max(next01(), 1e-300);
        double u2 = next01();
        double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2.0 * M_PI * u2);
        b = r * std::sin(2.0 * M_PI * u2);
    }
    std::vector<double> unit_direction(int n) {
        std::vector<double> d(n);
        for (int i = 0; i < n; i += 2) {
            double a, b;
            gaussian_pair(a, b);
            d[i] = a;
            if (i + 1 < n) d[i + 1] = b;
        }
        double s = 0;
        for (double t : d) s += t * t;
        s = std::sqrt(s);
        if (s < 1e-30) {
            d.assign(n, 0.0);
            d[0] = 1.0;
            return d;
        }
        for (double& t : d) t /= s;
        return d;
    }
    std::vector<double> ball_point(std::span<const double> center, double radius) {
        int n = static_cast<int>(center.size());
        auto dir = unit_direction(n);
        double r = radius * std::pow(next01(), 1.0 / n);
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) p[i] = center[i] + r * dir[i];
        return p;
    }
};

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

double dist(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Pull x back onto the closed ball; returns the distance from the center.
double clamp_to_ball(std::vector<double>& x, std::span<const double> center, double radius) {
    double d = 0;
    for (size_t i = 0; i < x.size(); ++i) d += (x[i] - center[i]) * (x[i] - center[i]);
    d = std::sqrt(d);
    if (d > radius) {
        double s = radius / d;
        for (size_t i = 0; i < x.size(); ++i) x[i] = center[i] + s * (x[i] - center[i]);
        d = radius;
    }
    return d;
}

// Newton projection onto the level set f = y along the gradient direction.
bool project_to_level(const NashBranch& branch, NashBranch::Cursor& cursor,
                      std::vector<double>& x, double y, std::span<const double> center,
                      double radius, double tol_rel) {
    for (int it = 0; it < 80; ++it) {
        double f;
        GradientValue g;
        try {
            f = cursor.move_to(x);
            g = cursor.gradient();
        } catch (const std::runtime_error&) {
            return false;
        }
        double noise = branch.eval_noise(x, f);
        double tol = std::max(tol_rel * std::abs(y), 4.0 * noise);
        double err = f - y;
        if (std::abs(err) <= tol) return true;
        if (g.norm_sq < 1e-26) return false;
        double step = err / g.norm_sq;
        for (size_t i = 0; i < x.size(); ++i) x[i] -= step * g.grad[i];
        clamp_to_ball(x, center, radius);
    }
    return false;
}

struct KernelResult {
    double u = kInf;
    std::vector<double> x;
    bool projected = false;
    bool converged = false;
    bool boundary = false;
    double residual = kInf;
};

// Multi-start work item: project one start onto the level set and descend
// along it, minimizing |grad f|^2 subject to f = y inside the ball.
KernelResult minimize_on_level(const NashBranch& branch, std::span<const double> center,
                               double y, std::span<const double> start,
                               const ProfileOptions& opts) {
    const int n = branch.dim();
    const double radius = branch.radius();
    KernelResult out;
    NashBranch::Cursor cursor(branch);
    std::vector<double> x(start.begin(), start.end());
    if (!project_to_level(branch, cursor, x, y, center, radius, opts.level_tol_rel)) return out;
    out.projected = true;

    double alpha = 0.05 * radius;
    double u = kInf;
    GradientValue g;
    std::vector<double> w(n), residual_vec(n), b(n);
    auto first_order = [&](const std::vector<double>& at, const GradientValue& grad,
                           std::vector<double>& rvec, bool& on_boundary) -> double {
        auto hess = cursor.hessian();
        for (int i = 0; i < n; ++i) {
            double s = 0;
            for (int j = 0; j < n; ++j) s += hess[static_cast<size_t>(i) * n + j] * grad.grad[j];
            w[i] = 2.0 * s;
        }
        double dcen = dist(at, center);
        on_boundary = dcen >= radius * (1.0 - opts.boundary_tol_rel);
        if (!on_boundary) {
            double lambda = grad.norm_sq > 0 ? dot(w, grad.grad) / grad.norm_sq : 0.0;
            for (int i = 0; i < n; ++i) rvec[i] = w[i] - lambda * grad.grad[i];
        } else {
            // Two multipliers on the sphere: least-squares against {grad f, x - c}.
            for (int i = 0; i < n; ++i) b[i] = at[i] - center[i];
            double a11 = grad.norm_sq, a12 = dot(grad.grad, b), a22 = dot(b, b);
            double r1 = dot(w, grad.grad), r2 = dot(w, b);
            double det = a11 * a22 - a12 * a12;
            double l1 = 0, l2 = 0;
            if (std::abs(det) > 1e-30) {
                l1 = (r1 * a22 - r2 * a12) / det;
                l2 = (a11 * r2 - a12 * r1) / det;
            } else if (a11 > 0) {
                l1 = r1 / a11;
            }
            for (int i = 0; i < n; ++i) rvec[i] = w[i] - l1 * grad.grad[i] - l2 * b[i];
        }
        return norm(rvec) / (1.0 + norm(w));
    };

    try {
        g = cursor.gradient();
    } catch (const std::runtime_error&) {
        out.projected = false;
        return out;
    }
    u = g.norm_sq;
    bool on_boundary = false;
    double res = kInf;
    for (int it = 0; it < opts.max_iterations; ++it) {
        if (u <= 1e-24) {  // critical point on the level: nothing below this
            res = 0.0;
            break;
        }
        try {
            res = first_order(x, g, residual_vec, on_boundary);
        } catch (const std::runtime_error&) {
            break;
        }
        if (res <= opts.lagrange_tol) break;
        double dn = norm(residual_vec);
        if (dn < 1e-20) break;
        bool improved = false;
        for (int trial = 0; trial < 30 && !improved; ++trial) {
            std::vector<double> xt(x);
            double s = alpha / dn;
            for (int i = 0; i < n; ++i) xt[i] -= s * residual_vec[i];
            clamp_to_ball(xt, center, radius);
            NashBranch::Cursor tcur = cursor;
            if (project_to_level(branch, tcur, xt, y, center, radius, opts.level_tol_rel)) {
                GradientValue gt;
                try {
                    gt = tcur.gradient();
                } catch (const std::runtime_error&) {
                    alpha *= 0.5;
                    continue;
                }
                if (gt.norm_sq < u * (1.0 - 1e-14)) {
                    x = xt;
                    cursor = tcur;
                    g = gt;
                    u = gt.norm_sq;
                    improved = true;
                    alpha = std::min(alpha * 1.6, 0.2 * radius);
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!improved) {
            if (alpha < 1e-13 * radius) break;
            alpha *= 0.5;
        }
    }
    if (std::isinf(res)) {
        try {
            res = first_order(x, g, residual_vec, on_boundary);
        } catch (const std::runtime_error&) {
            res = kInf;
        }
    }
    out.u = u;
    out.x = x;
    out.converged = (res <= opts.lagrange_tol) || u <= 1e-24;
    out.residual = res;
    out.boundary = on_boundary;
    return out;
}

std::vector<double> level_schedule(double epsilon, const ProfileOptions& opts) {
    if (opts.explicit_levels) return *opts.explicit_levels;
    std::vector<double> levels;
    double y = epsilon;
    for (int j = 1; j <= opts.level_count; ++j) {
        y *= 0.5;
        levels.push_back(opts.sign >= 0 ? y : -y);
    }
    return levels;
}

CriticalProfile assemble_profile(double epsilon, std::span<const double> levels,
                                 std::span<const KernelResult> results, int starts) {
    CriticalProfile profile;
    profile.epsilon = epsilon;
    for (size_t j = 0; j < levels.size(); ++j) {
        LevelRecord rec;
        rec.y = levels[j];
        rec.starts_used = starts;
        const KernelResult* best = nullptr;
        for (int k = 0; k < starts; ++k) {
            const KernelResult& r = results[j * static_cast<size_t>(starts) + k];
            if (!r.projected || !std::isfinite(r.u)) continue;
            if (!best || r.u < best->u) best = &r;
        }
        if (best) {
            rec.reachable = true;
            rec.u = best->u;
            rec.argmin = best->x;
            rec.converged = best->converged;
            rec.boundary = best->boundary;
            rec.lagrange_residual = best->residual;
        }
        profile.levels.push_back(std::move(rec));
    }
    std::stable_sort(profile.levels.begin(), profile.levels.end(),
                     [](const LevelRecord& a, const LevelRecord& b) {
                         return std::abs(a.y) > std::abs(b.y);
                     });
    return profile;
}

}  // namespace

size_t CriticalProfile::converged_count() const {
    size_t c = 0;
    for (const auto& l : levels)
        if (l.reachable && l.converged) ++c;
    return c;
}

std::vector<std::vector<double>> halton_ball_points(int count, std::span<const double> center,
                                                    double radius) {
    const int n = static_cast<int>(center.size());
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        std::vector<double> p(n);
        if (n == 1) {
            p[0] = center[0] + radius * (2.0 * halton(k + 1, 2) - 1.0);
        } else if (n == 2) {
            double r = radius * std::sqrt(halton(k + 1, 2));
            double th = 2.0 * M_PI * halton(k + 1, 3);
            p[0] = center[0] + r * std::cos(th);
            p[1] = center[1] + r * std::sin(th);
        } else {
            // Cube-to-ball radial map: deterministic and prefix-stable.
            double s = 0;
            for (int i = 0; i < n; ++i) {
                double v = 2.0 * halton(k + 1, kPrimes[i % 10]) - 1.0;
                p[i] = v;
                s += v * v;
            }
            double scale = radius / std::sqrt(static_cast<double>(n));
            for (int i = 0; i < n; ++i) p[i] = center[i] + scale * p[i];
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

CriticalProfile sample_profile(const NashBranch& branch, std::span<const double> center,
                               double epsilon, const ProfileOptions& opts) {
    auto levels = level_schedule(epsilon, opts);
    auto starts = halton_ball_points(opts.starts, center, 0.95 * branch.radius());
    std::vector<KernelResult> results(levels.size() * static_cast<size_t>(opts.starts));
    const int total = static_cast<int>(results.size());
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < total; ++idx) {
        size_t j = static_cast<size_t>(idx) / opts.starts;
        size_t k = static_cast<size_t>(idx) % opts.starts;
        results[idx] = minimize_on_level(branch, center, levels[j], starts[k], opts);
    }
    return assemble_profile(epsilon, levels, results, opts.starts);
}

CriticalProfile sample_profile_serial(const NashBranch& branch, std::span<const double> center,
                                      double epsilon, const ProfileOptions& opts) {
    auto levels = level_schedule(epsilon, opts);
    auto starts = halton_ball_points(opts.starts, center, 0.95 * branch.radius());
    std::vector<KernelResult> results(levels.size() * static_cast<size_t>(opts.starts));
    for (size_t j = 0; j < levels.size(); ++j)
        for (int k = 0; k < opts.starts; ++k)
            results[j * static_cast<size_t>(opts.starts) + k] =
                minimize_on_level(branch, center, levels[j], starts[k], opts);
    return assemble_profile(epsilon, levels, results, opts.starts);
}

CriticalValueScan critical_value_scan(const NashBranch& branch, std::span<const double> center,
                                      double window, int grid, int starts, double grad_tol) {
    if (window <= 0) throw std::invalid_argument("window must contain 0 with positive radius");
    ProfileOptions kopts;
    kopts.starts = starts;
    kopts.max_iterations = 80;
    kopts.level_tol_rel = 1e-8;
    std::vector<double> levels;
    for (int k = 1; k <= grid; ++k) {
        double y = window * k / grid;
        levels.push_back(y);
        levels.push_back(-y);
    }
    auto start_pts = halton_ball_points(starts, center, 0.95 * branch.radius());
    std::vector<double> umin(levels.size(), kInf);
    const int total = static_cast<int>(levels.size()) * starts;
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < total; ++idx) {
        size_t j = static_cast<size_t>(idx) / starts;
        int k = static_cast<int>(static_cast<size_t>(idx) % starts);
        KernelResult r = minimize_on_level(branch, center, levels[j], start_pts[k], kopts);
        if (r.projected) {
#pragma omp critical
            umin[j] = std::min(umin[j], r.u);
        }
    }
    // Median gradient scale over reachable levels, for the flag threshold.
    std::vector<double> mags;
    for (double u : umin)
        if (std::isfinite(u)) mags.push_back(std::sqrt(u));
    double med = 0.0;
    if (!mags.empty()) {
        std::sort(mags.begin(), mags.end());
        med = mags[mags.size() / 2];
    }
    double threshold = grad_tol * (1.0 + med);
    CriticalValueScan scan;
    scan.window = window;
    double nearest = kInf;
    for (size_t j = 0; j < levels.size(); ++j) {
        if (!std::isfinite(umin[j])) continue;
        if (std::sqrt(umin[j]) < threshold) {
            scan.flagged_levels.push_back(levels[j]);
            nearest = std::min(nearest, std::abs(levels[j]));
        }
    }
    std::sort(scan.flagged_levels.begin(), scan.flagged_levels.end());
    scan.suggested_epsilon = std::isfinite(nearest) ? nearest / 2.0 : window;
    return scan;
}

ExponentFit fit_exponent(const CriticalProfile& profile, FitMethod method) {
    std::vector<double> xs, ys;
    double ymin = kInf, ymax = 0.0;
    for (const auto& rec : profile.levels) {
        if (!rec.reachable || !rec.converged || rec.u <= 0.0 || rec.y == 0.0) continue;
        xs.push_back(std::log(std::abs(rec.y)));
        ys.push_back(0.5 * std::log(rec.u));
        ymin = std::min(ymin, std::abs(rec.y));
        ymax = std::max(ymax, std::abs(rec.y));
    }
    if (xs.size() < 4) throw FitError("fewer than 4 converged levels");
    double slope = 0.0, intercept = 0.0;
    const size_t m = xs.size();
    if (method == FitMethod::least_squares) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < m; ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double det = m * sxx - sx * sx;
        slope = (m * sxy - sx * sy) / det;
        intercept = (sy - slope * sx) / m;
    } else {
        std::vector<double> slopes;
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j)
                if (xs[i] != xs[j]) slopes.push_back((ys[i] - ys[j]) / (xs[i] - xs[j]));
        if (slopes.empty()) throw FitError("degenerate level schedule");
        std::sort(slopes.begin(), slopes.end());
        slope = slopes[slopes.size() / 2];
        double si = 0;
        for (size_t i = 0; i < m; ++i) si += ys[i] - slope * xs[i];
        intercept = si / m;
    }
    ExponentFit fit;
    fit.method = method == FitMethod::least_squares ? "least-squares" : "robust-median-slope";
    fit.rho_hat = slope;
    fit.negative_slope = slope < 0.0;
    fit.c0_hat = std::exp(intercept);
    fit.converged_levels = static_cast<int>(m);
    fit.y_min = ymin;
    fit.y_max = ymax;
    double c_safe = kInf, rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        double resid = ys[i] - (slope * xs[i] + intercept);
        rss += resid * resid;
        c_safe = std::min(c_safe, std::exp(ys[i] - slope * xs[i]));
    }
    fit.residual = std::sqrt(rss / m);
    fit.c_hat = c_safe;
    return fit;
}

// ---------------------------------------------------------------------------
// Zero-set sampling and distance exponents
// ---------------------------------------------------------------------------

PointIndex::PointIndex(std::vector<std::vector<double>> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("empty point set");
    nodes_.reserve(points_.size());
    std::vector<size_t> idx(points_.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
    // Median nearest-neighbor spacing over a deterministic subset.
    size_t probe = std::min<size_t>(points_.size(), 256);
    std::vector<double> nn;
    size_t stride = std::max<size_t>(1, points_.size() / probe);
    for (size_t i = 0; i < points_.size(); i += stride) {
        double best = kInf;
        for (size_t j = 0; j < points_.size(); ++j) {
            if (j == i) continue;
            best = std::min(best, dist(points_[i], points_[j]));
        }
        if (std::isfinite(best)) nn.push_back(best);
    }
    if (!nn.empty()) {
        std::sort(nn.begin(), nn.end());
        spacing_ = nn[nn.size() / 2];
    }
}

int PointIndex::build(std::vector<size_t>& idx, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    int axis = depth % static_cast<int>(points_[0].size());
    int mid = (lo + hi) / 2;
    std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi,
                     [&](size_t a, size_t b) { return points_[a][axis] < points_[b][axis]; });
    Node node;
    node.axis = axis;
    node.point = idx[mid];
    int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    nodes_[self].left = build(idx, lo, mid, depth + 1);
    nodes_[self].right = build(idx, mid + 1, hi, depth + 1);
    return self;
}

void PointIndex::search(int node, std::span<const double> q, double& best) const {
    if (node < 0) return;
    const Node& nd = nodes_[node];
    best = std::min(best, dist(points_[nd.point], q));
    double delta = q[nd.axis] - points_[nd.point][nd.axis];
    int near = delta < 0 ? nd.left : nd.right;
    int far = delta < 0 ? nd.right : nd.left;
    search(near, q, best);
    if (std::abs(delta) < best) search(far, q, best);
}

double PointIndex::nearest_distance(std::span<const double> q) const {
    double best = kInf;
    search(root_, q, best);
    return best;
}

std::vector<std::vector<double>> sample_zero_set(const NashBranch& branch,
                                                 std::span<const double> center,
                                                 const ZeroSetOptions& opts) {
    const int n = branch.dim();
    const double radius = branch.radius();
    const int attempts = opts.target_size * 4;
    auto starts = halton_ball_points(attempts, center, opts.region_fraction * radius);
    // Deduplication grid keeps the sample roughly uniform.
    double cell = 0.25 * radius / std::pow(static_cast<double>(opts.target_size),
                                           1.0 / std::max(1, n));
    std::map<std::vector<long>, std::vector<double>> cells;
    for (int a = 0; a < attempts && static_cast<int>(cells.size()) < opts.target_size; ++a) {
        NashBranch::Cursor cursor(branch);
        std::vector<double> x = starts[a];
        bool ok = false;
        try {
            for (int it = 0; it < opts.max_iterations; ++it) {
                double f = cursor.move_to(x);
                double tol = std::max(opts.f_tol, 4.0 * branch.eval_noise(x, f));
                if (std::abs(f) <= tol) {
                    ok = true;
                    break;
                }
                GradientValue g = cursor.gradient();
                if (g.norm_sq < 1e-26) break;
                double step = f / g.norm_sq;
                for (int i = 0; i < n; ++i) x[i] -= step * g.grad[i];
                if (clamp_to_ball(x, center, radius) >= radius) {
                    // Newton pushed outside; pull in and keep trying.
                }
            }
        } catch (const std::runtime_error&) {
            ok = false;
        }
        if (!ok) continue;
        std::vector<long> key(n);
        for (int i = 0; i < n; ++i) key[i] = std::lround(x[i] / cell);
        cells.try_emplace(std::move(key), x);
    }
    std::vector<std::vector<double>> sample;
    sample.reserve(cells.size());
    for (auto& [k, v] : cells) sample.push_back(std::move(v));
    if (sample.empty()) throw std::runtime_error("no zeros of f found in the region");
    return sample;
}

DistanceFit fit_distance_exponent(const NashBranch& branch, std::span<const double> center,
                                  const PointIndex& zero_index, const DistanceFitOptions& opts) {
    const int n = branch.dim();
    const double radius = branch.radius();
    const double dmax = opts.max_distance_fraction * radius;
    const double qmax = opts.query_radius_fraction * radius;
    const int bins = opts.shells;
    double dmin = dmax * std::pow(0.5, bins);
    // Below a few sample spacings the measured distance is dominated by the
    // discreteness of the zero-set sample; those shells would tilt the fit.
    dmin = std::max(dmin, 8.0 * zero_index.spacing());
    if (dmin >= dmax) throw FitError("zero-set sample too sparse for the requested shells");

    struct Envelope {
        double d = 0.0, value = kInf;
    };
    std::vector<Envelope> env(static_cast<size_t>(bins));
    auto bin_of = [&](double d) -> int {
        if (d <= dmin || d > dmax) return -1;
        int k = static_cast<int>(std::floor(std::log2(dmax / d)));
        return (k >= 0 && k < bins) ? k : -1;
    };

    struct Sample {
        double d, value;
    };
    std::vector<Sample> all;
    const auto& zeros = zero_index.points();
    auto evaluate = [&](std::span<const double> p) -> double {
        if (opts.gradient_mode) {
            GradientValue g = branch.gradient(p);
            return std::sqrt(g.norm_sq);
        }
        return std::abs(branch.eval(p));
    };

    // Anchored queries: step away from sampled zeros at shell distances.
    for (int shell = 0; shell < bins; ++shell) {
        double delta = dmax * std::pow(0.5, shell);
        for (int q = 0; q < opts.queries_per_shell; ++q) {
            Rng rng(splitmix64(opts.seed ^ (0x5151u + shell * 7919u + q)));
            size_t base = static_cast<size_t>(rng.next01() * zeros.size()) % zeros.size();
            auto dir = rng.unit_direction(n);
            if (dist(zeros[base], center) > qmax) continue;
            std::vector<double> p(n);
            for (int i = 0; i < n; ++i) p[i] = zeros[base][i] + delta * dir[i];
            if (dist(p, center) > qmax) continue;
            double d = zero_index.nearest_distance(p);
            int k = bin_of(d);
            if (k < 0) continue;
            double v;
            try {
                v = evaluate(p);
            } catch (const std::runtime_error&) {
                continue;
            }
            if (v <= 0 || !std::isfinite(v)) continue;
            all.push_back({d, v});
            if (v < env[k].value) env[k] = {d, v};
        }
    }
    // Center-anchored queries with log-uniform radii: these cover the cone
    // directions through the distinguished zero, where the worst exponent
    // typically lives.
    int center_queries = bins * opts.queries_per_shell / 2;
    for (int q = 0; q < center_queries; ++q) {
        Rng rng(splitmix64(opts.seed ^ (0xC0FEull + 131ull * q)));
        double rho = dmax * std::pow(0.5, rng.next01() * bins);
        auto dir = rng.unit_direction(n);
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) p[i] = center[i] + rho * dir[i];
        if (dist(p, center) > qmax) continue;
        double d = zero_index.nearest_distance(p);
        int k = bin_of(d);
        if (k < 0) continue;
        double v;
        try {
            v = evaluate(p);
        } catch (const std::runtime_error&) {
            continue;
        }
        if (v <= 0 || !std::isfinite(v)) continue;
        all.push_back({d, v});
        if (v < env[k].value) env[k] = {d, v};
    }

    std::vector<double> xs, ys;
    for (const auto& e : env) {
        if (!std::isfinite(e.value) || e.d <= 0) continue;
        xs.push_back(std::log(e.d));
        ys.push_back(std::log(e.value));
    }
    if (xs.size() < 4) throw FitError("too few populated distance shells");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const size_t m = xs.size();
    for (size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double det = m * sxx - sx * sx;
    double slope = (m * sxy - sx * sy) / det;
    double intercept = (sy - slope * sx) / m;

    DistanceFit fit;
    fit.alpha_hat = slope;
    fit.shells_used = static_cast<int>(m);
    fit.zero_sample_size = zero_index.size();
    fit.sample_spacing = zero_index.spacing();
    fit.gradient_mode = opts.gradient_mode;
    double rss = 0;
    for (size_t i = 0; i < m; ++i) {
        double r = ys[i] - (slope * xs[i] + intercept);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    double c = kInf;
    for (const auto& s : all) c = std::min(c, s.value / std::pow(s.d, slope));
    fit.c_hat = std::isfinite(c) ? c : 0.0;
    return fit;
}

// ---------------------------------------------------------------------------
// Inequality verification
// ---------------------------------------------------------------------------

namespace {

struct VerifySample {
    bool valid = false;
    double margin = kInf;
    std::vector<double> x;
};

VerifySample verify_one(const NashBranch& branch, std::span<const double> center, double rho,
                        double C, const VerifyOptions& opts, int index) {
    VerifySample out;
    Rng rng(splitmix64(opts.seed ^ (0xABCDull + 2654435761ull * index)));
    std::vector<double> p = rng.ball_point(center, branch.radius());
    NashBranch::Cursor cursor(branch);
    double f;
    try {
        f = cursor.move_to(p);
        if (index % 2 == 1 && opts.epsilon > 0) {
            // Level-stratified half: project onto a geometric level.
            int levels = 12;
            double target = opts.epsilon * std::pow(0.5, 1 + (index / 2) % levels);
            if (f < 0) target = -target;
            if (!project_to_level(branch, cursor, p, target, center, branch.radius(), 1e-9))
                return out;
            f = cursor.value();
        }
        double noise = branch.eval_noise(p, f);
        if (std::abs(f) <= std::max(64.0 * noise, opts.min_abs_f)) return out;  // below grading floor
        if (opts.epsilon > 0 && std::abs(f) >= opts.epsilon) return out;
        GradientValue g = cursor.gradient();
        double rhs = C * std::pow(std::abs(f), rho);
        if (rhs <= 0) return out;
        out.valid = true;
        out.margin = std::sqrt(g.norm_sq) / rhs - 1.0;
        out.x = p;
    } catch (const std::runtime_error&) {
        return out;
    }
    return out;
}

ViolationReport assemble_verify(std::span<const VerifySample> samples, double rel_tol) {
    ViolationReport rep;
    rep.worst_margin = kInf;
    for (const auto& s : samples) {
        if (!s.valid) continue;
        ++rep.samples;
        if (s.margin < rep.worst_margin) rep.worst_margin = s.margin;
        if (s.margin < -rel_tol) {
            ++rep.violations;
            if (rep.worst_points.size() < 16) rep.worst_points.push_back(s.x);
        }
    }
    rep.pass = rep.violations == 0;
    if (!std::isfinite(rep.worst_margin)) rep.worst_margin = 0.0;
    return rep;
}

}  // namespace

ViolationReport verify_inequality(const NashBranch& branch, std::span<const double> center,
                                  double rho, double C, const VerifyOptions& opts) {
    if (rho < 0 || rho >= 1) throw std::domain_error("rho must lie in [0, 1)");
    if (C <= 0) throw std::domain_error("C must be positive");
    std::vector<VerifySample> samples(static_cast<size_t>(opts.sample_count));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < opts.sample_count; ++i)
        samples[i] = verify_one(branch, center, rho, C, opts, i);
    return assemble_verify(samples, opts.rel_tol);
}

ViolationReport verify_inequality_serial(const NashBranch& branch, std::span<const double> center,
                                         double rho, double C, const VerifyOptions& opts) {
    if (rho < 0 || rho >= 1) throw std::domain_error("rho must lie in [0, 1)");
    if (C <= 0) throw std::domain_error("C must be positive");
    std::vector<VerifySample> samples(static_cast<size_t>(opts.sample_count));
    for (int i = 0; i < opts.sample_count; ++i)
        samples[i] = verify_one(branch, center, rho, C, opts, i);
    return assemble_verify(samples, opts.rel_tol);
}

}  // namespace lojex
