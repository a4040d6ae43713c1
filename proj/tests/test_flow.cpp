#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lojex/flow.hpp"

#include <cmath>

using namespace lojex;

namespace {

NashBranch make_branch(const std::string& text, int n, double radius = 1.0) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    names.push_back("y");
    return NashBranch(parse_polynomial(text, names), std::vector<double>(n, 0.0), 0.0, radius);
}

}  // namespace

TEST_CASE("radial descent length") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2, 2.0);
    Region X = Region::ball({0.0, 0.0}, 2.0);
    FlowOptions opts;
    opts.stop_tol_f = 1e-8;
    Trajectory traj = flow(b, std::vector<double>{0.6, 0.8}, X, opts);
    CHECK(traj.terminal == FlowTerminal::reached_zero_level);
    // Stops at |x| = sqrt(stop_tol): length = 1 - 1e-4 up to integrator error.
    CHECK(std::abs(traj.arc_length - (1.0 - 1e-4)) <= 2e-5);
    CHECK(std::abs(traj.arc_length - 1.0) <= 1.2e-4);
}

TEST_CASE("linear field flows straight") {
    NashBranch b = make_branch("y - x1", 2, 3.0);
    Region X = Region::ball({0.0, 0.0}, 3.0);
    FlowOptions opts;
    opts.stop_tol_f = 1e-6;
    Trajectory traj = flow(b, std::vector<double>{1.0, 0.0}, X, opts);
    CHECK(traj.terminal == FlowTerminal::reached_zero_level);
    CHECK(traj.arc_length == doctest::Approx(1.0 - 1e-6).epsilon(1e-6));
    // The path never leaves the x1 axis.
    for (const auto& p : traj.points) CHECK(std::abs(p[1]) <= 1e-12);
}

TEST_CASE("start preconditions") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2, 2.0);
    Region X = Region::ball({0.0, 0.0}, 2.0);
    CHECK_THROWS_AS(flow(b, std::vector<double>{0.0, 0.0}, X, {}), std::invalid_argument);
    std::vector<double> outside{5.0, 0.0};
    CHECK_THROWS_AS(flow(b, outside, X, {}), std::invalid_argument);
}

TEST_CASE("|f| decreases strictly along every trajectory") {
    NashBranch b = make_branch("y - x1^2*x2^2", 2, 2.0);
    Region X = Region::ball({0.0, 0.0}, 2.0);
    FlowOptions opts;
    opts.stop_tol_f = 1e-9;
    Trajectory traj = flow(b, std::vector<double>{0.5, 0.4}, X, opts);
    REQUIRE(traj.f_values.size() >= 2);
    for (size_t i = 1; i < traj.f_values.size(); ++i)
        CHECK(std::abs(traj.f_values[i]) < std::abs(traj.f_values[i - 1]));
}

TEST_CASE("integrator step refinement converges") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2, 2.0);
    Region X = Region::ball({0.0, 0.0}, 2.0);
    FlowOptions coarse;
    coarse.stop_tol_f = 1e-8;
    FlowOptions fine = coarse;
    fine.max_step = coarse.max_step / 2;
    fine.kappa = coarse.kappa / 2;
    double lc = flow(b, std::vector<double>{0.6, 0.8}, X, coarse).arc_length;
    double lf = flow(b, std::vector<double>{0.6, 0.8}, X, fine).arc_length;
    CHECK(std::abs(lc - lf) / lf <= 1e-4);
}

TEST_CASE("length sandwich on the radial branch is tight") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2, 2.0);
    Region X = Region::ball({0.0, 0.0}, 2.0);
    FlowOptions opts;
    opts.stop_tol_f = 1e-8;
    Trajectory traj = flow(b, std::vector<double>{0.6, 0.8}, X, opts);
    SandwichCheck check = check_length_bound(traj, 0.5, 2.0, 1.0, 1e-4, 1e-3);
    CHECK(check.applicable);
    CHECK(check.lower_ok);
    CHECK(check.upper_ok);
    CHECK(check.upper_tightness <= 1e-3);

    Trajectory left;
    left.terminal = FlowTerminal::left_domain;
    CHECK_FALSE(check_length_bound(left, 0.5, 2.0, std::nullopt, std::nullopt).applicable);
}

TEST_CASE("U region membership") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    Region X = Region::ball({0.0, 0.0}, 1.0);
    // (1/(C(1-rho))) |f|^{1-rho} = |x| for rho=1/2, C=2: inside iff |x| < 1 - |x|.
    CHECK(in_u_region(b, std::vector<double>{0.3, 0.0}, X, 0.5, 2.0));
    CHECK_FALSE(in_u_region(b, std::vector<double>{1.0, 0.0}, X, 0.5, 2.0));
    CHECK(in_u_region(b, std::vector<double>{1e-4, 0.0}, X, 0.5, 2.0));
    CHECK_FALSE(in_u_region(b, std::vector<double>{0.6, 0.0}, X, 0.5, 2.0));
}

TEST_CASE("KL reparametrized gradient bound") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    Region X = Region::ball({0.0, 0.0}, 1.0);
    KlCheck ok = check_kl(b, X, 0.5, 2.0, 5000, 0);
    CHECK(ok.pass);
    CHECK(ok.min_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ok.threshold == doctest::Approx(1.0));

    KlCheck bad = check_kl(b, X, 0.5, 2.5, 5000, 0);
    CHECK_FALSE(bad.pass);

    // rho = 0 reduces to |grad f| >= C.
    KlCheck base = check_kl(b, X, 0.0, 3.0, 2000, 0);
    CHECK_FALSE(base.pass);
}

TEST_CASE("Monte-Carlo sandwich harness") {
    NashBranch b = make_branch("y - x1^2 - x2^2", 2);
    Region X = Region::ball({0.0, 0.0}, 1.0);
    ZeroSetOptions zopts;
    zopts.target_size = 512;
    std::vector<double> center{0.0, 0.0};
    PointIndex zindex(sample_zero_set(b, center, zopts));
    SandwichOptions opts;
    opts.starts = 150;  // the U region for (1/2, 2) is the ball |x| < 1/2
    opts.flow.stop_tol_f = 1e-8;
    SandwichStats stats = run_sandwich_checks(b, X, 0.5, 2.0, zindex, opts);
    CHECK(stats.applicable >= 25);
    CHECK(stats.in_u_region >= 25);
    CHECK(stats.lower_violations == 0);
    CHECK(stats.upper_violations == 0);

    SandwichStats serial = run_sandwich_checks_serial(b, X, 0.5, 2.0, zindex, opts);
    CHECK(serial.applicable == stats.applicable);
    CHECK(serial.worst_lower_margin == stats.worst_lower_margin);
    CHECK(serial.worst_upper_margin == stats.worst_upper_margin);
}

TEST_CASE("region shapes") {
    Region ball = Region::ball({0.0, 0.0}, 1.0);
    CHECK(ball.interior_distance(std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(ball.interior_distance(std::vector<double>{0.6, 0.8}) == doctest::Approx(0.0));
    Region box = Region::box({-1.0, -2.0}, {1.0, 2.0});
    CHECK(box.contains(std::vector<double>{0.5, 1.5}));
    CHECK(box.interior_distance(std::vector<double>{0.5, 0.0}) == doctest::Approx(0.5));
    CHECK_FALSE(box.contains(std::vector<double>{1.5, 0.0}));
}
