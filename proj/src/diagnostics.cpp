#include "scenario/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "scenario/error.hpp"
#include "scenario/sampling.hpp"

namespace scenario {

namespace {

constexpr std::size_t kSurrogateMarginalSamples = 100000;
constexpr std::uint64_t kSurrogateStream = 0x5752474Du;
constexpr std::uint64_t kReferenceStream = 0x52454646u;

void check_tail_args(double eps, std::size_t mc_samples) {
    if (!(eps > 0.0)) throw InputError("tail probability needs epsilon > 0");
    if (mc_samples < 1) throw InputError("tail probability needs at least one Monte Carlo draw");
}

double proportion_se(double p, std::size_t m) {
    return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(m));
}

// Marginal at x: closed form if known, else the max over a large independent sample.
std::pair<double, bool> marginal_or_surrogate(const MinmaxProblem& problem,
                                              std::span<const double> x,
                                              const FeatureBlock* surrogate) {
    if (problem.marginal) return {problem.marginal(x), false};
    return {problem.cost->max_cost(x, *surrogate, surrogate->rows), true};
}

TailProfile make_profile(TailKind kind, double eps, DecisionGrid grid,
                         const std::vector<std::size_t>& counts, std::size_t m,
                         std::uint64_t seed) {
    TailProfile p;
    p.kind = kind;
    p.epsilon = eps;
    p.grid = std::move(grid);
    p.t_hat.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        p.t_hat[k] = static_cast<double>(counts[k]) / static_cast<double>(m);
    p.argmin = kernels::argmin_first(p.t_hat);
    p.tau_hat = p.t_hat[p.argmin];
    p.mc_samples = m;
    p.seed = seed;
    return p;
}

}  // namespace

double TailProfile::standard_error() const { return proportion_se(tau_hat, mc_samples); }

ReferenceValue reference_value(const MinmaxProblem& problem, std::uint64_t seed,
                               std::size_t reference_samples, const MinimizerConfig& cfg) {
    if (problem.optimum) return {*problem.optimum, false};
    const FeatureBlock block =
        sample_features(problem, reference_samples, spawn_substream(seed, kReferenceStream));
    return {solve_on_features(problem, block, block.rows, seed, cfg).value, true};
}

double tail_probability_mc(const MinmaxProblem& problem, std::span<const double> x, double eps,
                           double j_ref, std::size_t mc_samples, std::uint64_t seed) {
    check_tail_args(eps, mc_samples);
    if (!problem.decision.contains(x) || x.size() != problem.decision.dim())
        throw InputError(problem.name + ": decision outside the box");
    const FeatureBlock block = sample_features(problem, mc_samples, seed);
    const std::size_t hits = problem.cost->count_above(x, block, block.rows, j_ref - eps);
    return static_cast<double>(hits) / static_cast<double>(mc_samples);
}

TailEstimate worst_case_tail_mc(const MinmaxProblem& problem, std::span<const double> x,
                                double eps, std::size_t mc_samples, std::uint64_t seed) {
    check_tail_args(eps, mc_samples);
    if (!problem.decision.contains(x) || x.size() != problem.decision.dim())
        throw InputError(problem.name + ": decision outside the box");
    std::optional<FeatureBlock> surrogate;
    if (!problem.marginal)
        surrogate = sample_features(problem, kSurrogateMarginalSamples,
                                    spawn_substream(seed, kSurrogateStream));
    const auto [g, substituted] = marginal_or_surrogate(problem, x, surrogate ? &*surrogate : nullptr);
    const FeatureBlock block = sample_features(problem, mc_samples, seed);
    const std::size_t hits = problem.cost->count_above(x, block, block.rows, g - eps);
    TailEstimate est;
    est.value = static_cast<double>(hits) / static_cast<double>(mc_samples);
    est.mc_samples = mc_samples;
    est.standard_error = proportion_se(est.value, mc_samples);
    est.marginal_substituted = substituted;
    return est;
}

TailProfile inf_tail_probability(const MinmaxProblem& problem, double eps, double j_ref,
                                 const GridSpec& spec, std::size_t mc_samples, std::uint64_t seed) {
    check_tail_args(eps, mc_samples);
    DecisionGrid grid = make_grid(problem.decision, spec.points_per_dim);
    const FeatureBlock block = sample_features(problem, mc_samples, seed);
    const std::vector<double> thresholds(grid.size(), j_ref - eps);
    const auto counts =
        kernels::count_above_on_grid(*problem.cost, grid, block, block.rows, thresholds);
    TailProfile p = make_profile(TailKind::Optimum, eps, std::move(grid), counts, mc_samples, seed);
    p.reference_value = j_ref;
    return p;
}

TailProfile inf_worst_case_tail(const MinmaxProblem& problem, double eps, const GridSpec& spec,
                                std::size_t mc_samples, std::uint64_t seed) {
    check_tail_args(eps, mc_samples);
    DecisionGrid grid = make_grid(problem.decision, spec.points_per_dim);
    std::optional<FeatureBlock> surrogate;
    if (!problem.marginal)
        surrogate = sample_features(problem, kSurrogateMarginalSamples,
                                    spawn_substream(seed, kSurrogateStream));
    std::vector<double> thresholds(grid.size());
    bool substituted = false;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto [g, sub] =
            marginal_or_surrogate(problem, grid.point(k), surrogate ? &*surrogate : nullptr);
        thresholds[k] = g - eps;
        substituted = sub;
    }
    const FeatureBlock block = sample_features(problem, mc_samples, seed);
    const auto counts =
        kernels::count_above_on_grid(*problem.cost, grid, block, block.rows, thresholds);
    TailProfile p = make_profile(TailKind::WorstCase, eps, std::move(grid), counts, mc_samples, seed);
    p.reference_value = std::numeric_limits<double>::quiet_NaN();
    p.reference_substituted = substituted;
    return p;
}

double default_obstruction_threshold(std::size_t mc_samples) {
    if (mc_samples < 1) throw InputError("threshold needs at least one Monte Carlo draw");
    return 10.0 / (2.0 * std::sqrt(static_cast<double>(mc_samples)));
}

std::vector<ObstructionVerdict> obstruction_report(const MinmaxProblem& problem,
                                                   std::span<const double> epsilons,
                                                   const ObstructionConfig& cfg) {
    if (epsilons.empty()) throw InputError("obstruction report needs at least one epsilon");
    for (double e : epsilons)
        if (!(e > 0.0)) throw InputError("obstruction report epsilons must be positive");
    const auto& factors = cfg.expansion_factors;
    if (factors.empty()) throw InputError("obstruction report needs at least one expansion stage");
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (!(factors[i] > 0.0)) throw InputError("expansion factors must be positive");
        if (i > 0 && !(factors[i] > factors[i - 1]))
            throw InputError("expansion factors must be strictly ascending");
    }
    if (cfg.mc_samples < 1) throw InputError("obstruction report needs mc_samples >= 1");
    const double threshold = cfg.threshold.value_or(default_obstruction_threshold(cfg.mc_samples));

    const ReferenceValue ref = reference_value(problem, cfg.seed);
    // One scenario block for every stage and every epsilon.
    const FeatureBlock block = sample_features(problem, cfg.mc_samples, cfg.seed);

    std::vector<DecisionGrid> grids;
    std::vector<DecisionBox> boxes;
    for (double f : factors) {
        boxes.push_back(problem.decision.expanded(f, problem.expansion_limit));
        grids.push_back(make_grid(boxes.back(), cfg.grid.points_per_dim));
    }

    std::vector<ObstructionVerdict> out;
    for (double eps : epsilons) {
        ObstructionVerdict v;
        v.epsilon = eps;
        v.threshold = threshold;
        v.reference_value = ref.value;
        v.reference_substituted = ref.substituted;
        for (std::size_t s = 0; s < factors.size(); ++s) {
            const std::vector<double> thresholds(grids[s].size(), ref.value - eps);
            const auto counts = kernels::count_above_on_grid(*problem.cost, grids[s], block,
                                                             block.rows, thresholds);
            const std::size_t low = *std::min_element(counts.begin(), counts.end());
            v.stages.push_back({factors[s], boxes[s],
                                static_cast<double>(low) / static_cast<double>(cfg.mc_samples)});
        }
        bool nonincreasing = true;
        for (std::size_t s = 1; s < v.stages.size(); ++s)
            nonincreasing = nonincreasing && v.stages[s].tau_hat <= v.stages[s - 1].tau_hat;
        const bool grew = boxes.back().strictly_contains(boxes.front());
        const bool below = v.stages.back().tau_hat < threshold;
        v.flag = (grew && nonincreasing && below) ? Verdict::SuspectedObstruction
                                                  : Verdict::NoEvidence;
        out.push_back(std::move(v));
    }
    return out;
}

void write_profile_csv(const TailProfile& profile, std::ostream& out) {
    const std::size_t n = profile.grid.dim;
    if (n == 1) {
        out << "x";
    } else {
        for (std::size_t i = 0; i < n; ++i) out << (i ? ",x" : "x") << (i + 1);
    }
    out << ",t_hat\n";
    char buf[64];
    for (std::size_t k = 0; k < profile.grid.size(); ++k) {
        for (double c : profile.grid.point(k)) {
            std::snprintf(buf, sizeof buf, "%.17g,", c);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%.17g\n", profile.t_hat[k]);
        out << buf;
    }
}

std::string_view verdict_name(Verdict v) {
    return v == Verdict::SuspectedObstruction ? "suspected_obstruction" : "no_evidence";
}

}  // namespace scenario
