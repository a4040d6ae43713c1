#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lojex/bounds.hpp"
#include "lojex/profile.hpp"

#include <cmath>

using namespace lojex;

namespace {

NashBranch make_branch(const std::string& text, int n, double radius = 1.0) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    names.push_back("y");
    return NashBranch(parse_polynomial(text, names), std::vector<double>(n, 0.0), 0.0, radius);
}

CriticalProfile profile_of(const NashBranch& b, double eps, int levels = 12, int starts = 32,
                           int sign = +1) {
    ProfileOptions opts;
    opts.level_count = levels;
    opts.starts = starts;
    opts.sign = sign;
    std::vector<double> center(b.dim(), 0.0);
    return sample_profile(b, center, eps, opts);
}

}  // namespace

TEST_CASE("radial profile lies exactly on u = 4y") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    CriticalProfile prof = profile_of(b, 0.5, 10);
    REQUIRE(prof.levels.size() == 10);
    for (const auto& rec : prof.levels) {
        REQUIRE(rec.reachable);
        CHECK(rec.converged);
        CHECK(rec.u == doctest::Approx(4.0 * rec.y).epsilon(1e-6));
        CHECK(rec.lagrange_residual <= 1e-6);
        CHECK_FALSE(rec.boundary);
    }
    ExponentFit fit = fit_exponent(prof);
    CHECK(std::abs(fit.rho_hat - 0.5) <= 0.01);
    CHECK(fit.c_hat == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("axes profile follows the diagonal law u = 8 y^{3/2}") {
    NashBranch b = make_branch("y - x1^2*x2^2", 2);
    CriticalProfile prof = profile_of(b, 0.1, 12);
    int converged = 0;
    for (const auto& rec : prof.levels) {
        if (!rec.reachable || !rec.converged) continue;
        ++converged;
        CHECK(rec.u == doctest::Approx(8.0 * std::pow(rec.y, 1.5)).epsilon(5e-3));
        // The minimizer sits on the diagonal |x1| = |x2|.
        CHECK(std::abs(std::abs(rec.argmin[0]) - std::abs(rec.argmin[1])) <= 1e-3);
    }
    CHECK(converged >= 8);
    ExponentFit fit = fit_exponent(prof);
    CHECK(std::abs(fit.rho_hat - 0.75) <= 0.02);
}

TEST_CASE("linear branch has constant gradient") {
    NashBranch b = make_branch("y - x1", 2);
    CriticalProfile prof = profile_of(b, 0.25, 8);
    for (const auto& rec : prof.levels) {
        REQUIRE(rec.reachable);
        CHECK(rec.u == doctest::Approx(1.0).epsilon(1e-9));
    }
    ExponentFit fit = fit_exponent(prof);
    CHECK(std::abs(fit.rho_hat) <= 0.01);
}

TEST_CASE("one-dimensional monomial law") {
    for (int k = 2; k <= 6; ++k) {
        NashBranch b = make_branch("y - x1^" + std::to_string(k), 1);
        CriticalProfile prof = profile_of(b, 0.25, 12);
        ExponentFit fit = fit_exponent(prof);
        double expected = 1.0 - 1.0 / k;
        CHECK(std::abs(fit.rho_hat - expected) <= 0.01);
    }
}

TEST_CASE("negative sign levels on a sign-definite function are unreachable") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    CriticalProfile prof = profile_of(b, 0.5, 8, 16, -1);
    for (const auto& rec : prof.levels) CHECK_FALSE(rec.reachable);
    CHECK_THROWS_AS(fit_exponent(prof), FitError);
}

TEST_CASE("parallel kernel matches the serial reference bit for bit") {
    NashBranch b = make_branch("y - x1^2*x2^2", 2);
    ProfileOptions opts;
    opts.level_count = 8;
    opts.starts = 16;
    std::vector<double> center{0.0, 0.0};
    CriticalProfile par = sample_profile(b, center, 0.1, opts);
    CriticalProfile ser = sample_profile_serial(b, center, 0.1, opts);
    REQUIRE(par.levels.size() == ser.levels.size());
    for (size_t i = 0; i < par.levels.size(); ++i) {
        CHECK(par.levels[i].y == ser.levels[i].y);
        CHECK(par.levels[i].u == ser.levels[i].u);
        CHECK(par.levels[i].argmin == ser.levels[i].argmin);
        CHECK(par.levels[i].converged == ser.levels[i].converged);
    }
}

TEST_CASE("doubling starts never increases a level minimum") {
    NashBranch b = make_branch("y - x1^2*x2^2", 2);
    std::vector<double> center{0.0, 0.0};
    ProfileOptions a;
    a.level_count = 8;
    a.starts = 8;
    ProfileOptions d = a;
    d.starts = 16;
    CriticalProfile pa = sample_profile(b, center, 0.1, a);
    CriticalProfile pd = sample_profile(b, center, 0.1, d);
    for (size_t i = 0; i < pa.levels.size(); ++i) {
        if (!pa.levels[i].reachable) continue;
        CHECK(pd.levels[i].u <= pa.levels[i].u + 1e-15);
    }
}

TEST_CASE("critical value scan") {
    NashBranch circle = make_branch("y - x1^2 - x2^2", 2);
    std::vector<double> center{0.0, 0.0};
    auto scan = critical_value_scan(circle, center, 0.5, 20);
    CHECK(scan.flagged_levels.empty());
    CHECK(scan.suggested_epsilon == doctest::Approx(0.5));

    NashBranch axes = make_branch("y - x1^2*x2^2", 2);
    auto scan2 = critical_value_scan(axes, center, 0.2, 20);
    CHECK(scan2.flagged_levels.empty());
    CHECK(scan2.suggested_epsilon == doctest::Approx(0.2));

    // (x1^2 - 1)^2 has the nonzero critical value 1 (at x1 = 0).
    NashBranch quartic = make_branch("y - (x1^2 - 1)^2", 1, 1.5);
    std::vector<double> c1{0.0};
    auto scan3 = critical_value_scan(quartic, c1, 2.0, 40);
    bool flagged_one = false;
    for (double lv : scan3.flagged_levels)
        if (std::abs(lv - 1.0) <= 1e-9) flagged_one = true;
    CHECK(flagged_one);
    CHECK(scan3.suggested_epsilon == doctest::Approx(0.5));
}

TEST_CASE("distance exponent fits") {
    std::vector<double> center{0.0, 0.0};
    ZeroSetOptions zopts;
    zopts.target_size = 4096;

    NashBranch circle = make_branch("y - x1^2 - x2^2", 2);
    PointIndex zc(sample_zero_set(circle, center, zopts));
    DistanceFitOptions dopts;
    DistanceFit fc = fit_distance_exponent(circle, center, zc, dopts);
    CHECK(std::abs(fc.alpha_hat - 2.0) <= 0.05);

    NashBranch axes = make_branch("y - x1^2*x2^2", 2);
    PointIndex za(sample_zero_set(axes, center, zopts));
    DistanceFit fa = fit_distance_exponent(axes, center, za, dopts);
    CHECK(std::abs(fa.alpha_hat - 4.0) <= 0.1);

    NashBranch lin = make_branch("y - x1", 2);
    PointIndex zl(sample_zero_set(lin, center, zopts));
    DistanceFit fl = fit_distance_exponent(lin, center, zl, dopts);
    CHECK(std::abs(fl.alpha_hat - 1.0) <= 0.05);

    // Gradient mode: |grad f| ~ dist^1 for the radial branch.
    dopts.gradient_mode = true;
    DistanceFit fg = fit_distance_exponent(circle, center, zc, dopts);
    CHECK(std::abs(fg.alpha_hat - 1.0) <= 0.05);
}

TEST_CASE("empirical exponents respect the closed-form bounds") {
    struct Case {
        std::string text;
        int n;
        double eps;
    };
    std::vector<double> center{0.0, 0.0};
    for (const Case& c : {Case{"y - x1^2 - x2^2", 2, 0.5}, Case{"y - x1^2*x2^2", 2, 0.1},
                          Case{"(y+1)^2 - 1 - x1^2 - x2^2", 2, 0.25}}) {
        NashBranch b = make_branch(c.text, c.n);
        CriticalProfile prof = profile_of(b, c.eps, 12);
        ExponentFit fit = fit_exponent(prof);
        Assumptions a;
        a.partial_y_nonzero = true;
        auto rep = rho_bounds(c.n, b.degree(), a);
        CHECK(fit.rho_hat <= rep.best()->value.get_d() + 1e-9);

        ZeroSetOptions zopts;
        zopts.target_size = 2048;
        PointIndex zi(sample_zero_set(b, center, zopts));
        DistanceFit df = fit_distance_exponent(b, center, zi, {});
        CHECK(df.alpha_hat <= s_bound(c.n, b.degree()).get_d() + 1e-9);
        // Empirical form of the trajectory-length comparison.
        CHECK(df.alpha_hat <= 1.0 / (1.0 - fit.rho_hat) + 0.1);
    }
}

TEST_CASE("inequality verification") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    std::vector<double> center{0.0, 0.0};
    VerifyOptions opts;
    opts.sample_count = 2000;
    opts.epsilon = 0.5;
    ViolationReport pass = verify_inequality(b, center, 0.5, 2.0, opts);
    CHECK(pass.pass);
    CHECK(pass.samples > 500);
    CHECK(std::abs(pass.worst_margin) <= 1e-9);

    ViolationReport fail = verify_inequality(b, center, 0.5, 2.1, opts);
    CHECK_FALSE(fail.pass);
    CHECK(fail.violations == fail.samples);

    // rho = 0 with a small enough constant always passes away from zeros.
    ViolationReport base = verify_inequality(b, center, 0.0, 1e-6, opts);
    CHECK(base.pass);

    ViolationReport ser = verify_inequality_serial(b, center, 0.5, 2.0, opts);
    CHECK(ser.samples == pass.samples);
    CHECK(ser.worst_margin == pass.worst_margin);
}

TEST_CASE("fit diagnostics") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    CriticalProfile prof = profile_of(b, 0.5, 10);
    ExponentFit robust = fit_exponent(prof, FitMethod::robust_median_slope);
    CHECK(std::abs(robust.rho_hat - 0.5) <= 0.01);
    CHECK(robust.method == "robust-median-slope");
    ExponentFit ls = fit_exponent(prof);
    CHECK(ls.residual <= 1e-6);
    CHECK(ls.converged_levels == 10);
}
