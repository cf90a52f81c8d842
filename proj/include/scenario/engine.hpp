#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scenario/problem.hpp"
#include "scenario/sampling.hpp"

namespace scenario {

enum class Refinement { None, GoldenSection1D };

/// Outer minimisation of the sampled marginal: dense grid scan, then (for a
/// one-dimensional decision) golden-section search between the neighbours of
/// the best grid point.
struct MinimizerConfig {
    std::size_t grid_points_per_dim = 2001;
    Refinement refinement = Refinement::GoldenSection1D;
    double refinement_tolerance = 1e-9;

    void validate() const;
};

struct ScenarioSolution {
    double value = 0.0;  // J_N
    std::vector<double> minimizer;
    std::size_t sample_size = 0;
    std::uint64_t seed = 0;
    MinimizerConfig config;
};

ScenarioSolution solve_scenario(const MinmaxProblem& problem, const SampleBatch& batch,
                                const MinimizerConfig& cfg = {});

/// Same as solve_scenario on the first `count` rows of already reduced scenarios.
ScenarioSolution solve_on_features(const MinmaxProblem& problem, const FeatureBlock& block,
                                   std::size_t count, std::uint64_t seed,
                                   const MinimizerConfig& cfg = {});

/// J* - J_N. Throws Unavailable when the problem has no known optimum.
double error_vs_true(const ScenarioSolution& solution, const MinmaxProblem& problem);

/// Solutions on the first N scenarios of the single stream keyed by `master_seed`,
/// for each N in `sizes` (strictly increasing).
std::vector<ScenarioSolution> nested_run(const MinmaxProblem& problem, std::uint64_t master_seed,
                                         std::span<const std::size_t> sizes,
                                         const MinimizerConfig& cfg = {});

}  // namespace scenario
