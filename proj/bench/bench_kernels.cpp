// Serial reference vs OpenMP grid kernels on the same inputs.
// Usage: bench_kernels [grid_points] [scenarios] [dim]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "scenario/kernels.hpp"
#include "scenario/problem.hpp"
#include "scenario/sampling.hpp"

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace scenario;
    const std::size_t points = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2001;
    const std::size_t n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 100000;
    const std::size_t d = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 20;

    const MinmaxProblem p = infnorm_cube(d);
    const FeatureBlock block = sample_features(p, n, 1);
    const DecisionGrid grid = make_grid(p.decision, points);
    const std::vector<double> thresholds(grid.size(), -0.1);

    std::vector<double> a, b;
    std::vector<std::size_t> c, e;
    const double t_max_serial = best_of(3, [&] { a = kernels::max_cost_on_grid_serial(*p.cost, grid, block, n); });
    const double t_max_omp = best_of(3, [&] { b = kernels::max_cost_on_grid(*p.cost, grid, block, n); });
    const double t_cnt_serial =
        best_of(3, [&] { c = kernels::count_above_on_grid_serial(*p.cost, grid, block, n, thresholds); });
    const double t_cnt_omp = best_of(3, [&] { e = kernels::count_above_on_grid(*p.cost, grid, block, n, thresholds); });

    const double evals = static_cast<double>(grid.size()) * static_cast<double>(n);
    std::printf("workers=%d grid=%zu scenarios=%zu dim=%zu\n", worker_count(), grid.size(), n, d);
    std::printf("%-22s %10s %12s %8s\n", "kernel", "seconds", "Meval/s", "match");
    std::printf("%-22s %10.4f %12.1f %8s\n", "max_cost serial", t_max_serial, evals / t_max_serial / 1e6, "-");
    std::printf("%-22s %10.4f %12.1f %8s\n", "max_cost omp", t_max_omp, evals / t_max_omp / 1e6, a == b ? "yes" : "NO");
    std::printf("%-22s %10.4f %12.1f %8s\n", "count_above serial", t_cnt_serial, evals / t_cnt_serial / 1e6, "-");
    std::printf("%-22s %10.4f %12.1f %8s\n", "count_above omp", t_cnt_omp, evals / t_cnt_omp / 1e6, c == e ? "yes" : "NO");
    return a == b && c == e ? 0 : 1;
}
