// Compares the OpenMP profile/verification kernels against their serial
// reference implementations.
#include "lojex/flow.hpp"
#include "lojex/profile.hpp"

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace lojex;

namespace {

NashBranch make_branch(const std::string& text, int n, double radius = 1.0) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    names.push_back("y");
    return NashBranch(parse_polynomial(text, names), std::vector<double>(n, 0.0), 0.0, radius);
}

template <typename F>
double time_seconds(F&& fn, int repeats = 3) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report_row(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    NashBranch axes = make_branch("y - x1^2*x2^2", 2);
    NashBranch nash = make_branch("(y+1)^2 - 1 - x1^2 - x2^2", 2);
    std::vector<double> center{0.0, 0.0};

    {
        ProfileOptions opts;
        opts.level_count = 16;
        opts.starts = 64;
        double ser = time_seconds([&] { sample_profile_serial(axes, center, 0.1, opts); });
        double par = time_seconds([&] { sample_profile(axes, center, 0.1, opts); });
        report_row("profile: polynomial", ser, par);
    }
    {
        ProfileOptions opts;
        opts.level_count = 12;
        opts.starts = 48;
        double ser = time_seconds([&] { sample_profile_serial(nash, center, 0.25, opts); }, 2);
        double par = time_seconds([&] { sample_profile(nash, center, 0.25, opts); }, 2);
        report_row("profile: implicit branch", ser, par);
    }
    {
        VerifyOptions opts;
        opts.sample_count = 200000;
        opts.epsilon = 0.1;
        double ser =
            time_seconds([&] { verify_inequality_serial(axes, center, 0.75, 2.8, opts); });
        double par = time_seconds([&] { verify_inequality(axes, center, 0.75, 2.8, opts); });
        report_row("inequality verification", ser, par);
    }
    {
        Region X = Region::ball(center, 1.0);
        ZeroSetOptions zopts;
        zopts.target_size = 1024;
        PointIndex zindex(sample_zero_set(axes, center, zopts));
        SandwichOptions opts;
        opts.starts = 256;
        opts.f_window = 0.1;
        double ser = time_seconds(
            [&] { run_sandwich_checks_serial(axes, X, 0.75, 2.8, zindex, opts); }, 2);
        double par =
            time_seconds([&] { run_sandwich_checks(axes, X, 0.75, 2.8, zindex, opts); }, 2);
        report_row("flow sandwich harness", ser, par);
    }
    return 0;
}
