#include "scenario/engine.hpp"

#include <algorithm>
#include <cmath>

#include "scenario/error.hpp"
#include "scenario/kernels.hpp"

namespace scenario {

void MinimizerConfig::validate() const {
    if (grid_points_per_dim < 2) throw InputError("grid_points_per_dim must be >= 2");
    if (!(refinement_tolerance > 0.0)) throw InputError("refinement tolerance must be > 0");
}

namespace {

constexpr std::size_t kMaxDecisionDim = 3;

struct Candidate {
    double x;
    double value;
};

// Golden-section search of the sampled marginal on [lo, hi]. The function is
// not assumed unimodal; the bracket is only the grid cell pair around the best
// grid point, and the caller keeps the grid value if refinement does worse.
Candidate golden_section(const CostModel& model, const FeatureBlock& block, std::size_t count,
                         double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto eval = [&](double x) { return model.max_cost(std::span<const double>(&x, 1), block, count); };
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c), fd = eval(d);
    Candidate best = fc <= fd ? Candidate{c, fc} : Candidate{d, fd};
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
            if (fc < best.value) best = {c, fc};
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
            if (fd < best.value) best = {d, fd};
        }
    }
    return best;
}

}  // namespace

ScenarioSolution solve_on_features(const MinmaxProblem& problem, const FeatureBlock& block,
                                   std::size_t count, std::uint64_t seed,
                                   const MinimizerConfig& cfg) {
    cfg.validate();
    if (count == 0) throw InputError("scenario problem needs at least one scenario");
    if (count > block.rows) throw InputError("requested more scenarios than the block holds");
    if (block.width != problem.cost->feature_width(problem.uncertainty.dim))
        throw InputError(problem.name + ": feature block width does not match the cost");
    if (problem.decision.dim() > kMaxDecisionDim)
        throw InputError("decision dimension above 3 is not supported by the grid minimizer");

    const DecisionGrid grid = make_grid(problem.decision, cfg.grid_points_per_dim);
    const std::vector<double> values = kernels::max_cost_on_grid(*problem.cost, grid, block, count);
    const std::size_t best = kernels::argmin_first(values);

    ScenarioSolution sol;
    sol.value = values[best];
    const auto p = grid.point(best);
    sol.minimizer.assign(p.begin(), p.end());
    sol.sample_size = count;
    sol.seed = seed;
    sol.config = cfg;

    if (cfg.refinement == Refinement::GoldenSection1D && grid.dim == 1) {
        const double lo = grid.point(best == 0 ? 0 : best - 1)[0];
        const double hi = grid.point(std::min(best + 1, grid.size() - 1))[0];
        if (hi > lo) {
            const Candidate refined =
                golden_section(*problem.cost, block, count, lo, hi, cfg.refinement_tolerance);
            if (refined.value < sol.value) {
                sol.value = refined.value;
                sol.minimizer = {refined.x};
            }
        }
    }
    return sol;
}

ScenarioSolution solve_scenario(const MinmaxProblem& problem, const SampleBatch& batch,
                                const MinimizerConfig& cfg) {
    if (batch.empty()) throw InputError("scenario problem needs a nonempty batch");
    if (batch.dim() != problem.uncertainty.dim)
        throw InputError(problem.name + ": batch dimension does not match the uncertainty");
    const FeatureBlock block = reduce_batch(problem, batch);
    return solve_on_features(problem, block, block.rows, batch.seed, cfg);
}

double error_vs_true(const ScenarioSolution& solution, const MinmaxProblem& problem) {
    if (!problem.optimum) throw Unavailable(problem.name + ": optimal value J* is unknown");
    return *problem.optimum - solution.value;
}

std::vector<ScenarioSolution> nested_run(const MinmaxProblem& problem, std::uint64_t master_seed,
                                         std::span<const std::size_t> sizes,
                                         const MinimizerConfig& cfg) {
    if (sizes.empty()) throw InputError("nested run needs at least one sample size");
    if (sizes.front() == 0) throw InputError("nested run sample sizes must be positive");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] <= sizes[i - 1]) throw InputError("nested run sample sizes must be strictly increasing");

    const FeatureBlock block = sample_features(problem, sizes.back(), master_seed);
    std::vector<ScenarioSolution> out;
    out.reserve(sizes.size());
    for (std::size_t n : sizes) out.push_back(solve_on_features(problem, block, n, master_seed, cfg));
    return out;
}

}  // namespace scenario
