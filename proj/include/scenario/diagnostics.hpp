#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "scenario/engine.hpp"
#include "scenario/kernels.hpp"
#include "scenario/problem.hpp"

namespace scenario {

struct GridSpec {
    std::size_t points_per_dim = 201;
};

struct TailEstimate {
    double value = 0.0;
    std::size_t mc_samples = 0;
    double standard_error = 0.0;
    // The marginal g(x) was unknown and replaced by a large-sample sampled marginal.
    bool marginal_substituted = false;
};

enum class TailKind { Optimum, WorstCase };

/// Monte Carlo estimates of a tail probability over a decision grid, all from
/// one shared block of scenarios.
///   Optimum:   t(x, eps)    = P(f(x, xi) > J_ref - eps)
///   WorstCase: t_wc(x, eps) = P(f(x, xi) > g(x) - eps)
struct TailProfile {
    TailKind kind = TailKind::Optimum;
    double epsilon = 0.0;
    DecisionGrid grid;
    std::vector<double> t_hat;
    double tau_hat = 1.0;  // min of t_hat
    std::size_t argmin = 0;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 0;
    double reference_value = 0.0;  // J_ref; unused for WorstCase
    bool reference_substituted = false;

    double standard_error() const;  // of the estimate at the argmin
};

struct ReferenceValue {
    double value = 0.0;
    bool substituted = false;  // true when J* was unknown and a scenario run stood in
};

/// J* when the problem knows it, else the best J_N of a reference scenario run.
ReferenceValue reference_value(const MinmaxProblem& problem, std::uint64_t seed,
                               std::size_t reference_samples = 10000,
                               const MinimizerConfig& cfg = {});

double tail_probability_mc(const MinmaxProblem& problem, std::span<const double> x, double eps,
                           double j_ref, std::size_t mc_samples, std::uint64_t seed);

TailEstimate worst_case_tail_mc(const MinmaxProblem& problem, std::span<const double> x,
                                double eps, std::size_t mc_samples, std::uint64_t seed);

TailProfile inf_tail_probability(const MinmaxProblem& problem, double eps, double j_ref,
                                 const GridSpec& grid, std::size_t mc_samples, std::uint64_t seed);

TailProfile inf_worst_case_tail(const MinmaxProblem& problem, double eps, const GridSpec& grid,
                                std::size_t mc_samples, std::uint64_t seed);

/// 10 standard errors of a proportion estimated from M draws, 10 / (2 sqrt(M)).
double default_obstruction_threshold(std::size_t mc_samples);

enum class Verdict { NoEvidence, SuspectedObstruction };

struct ObstructionStage {
    double factor = 1.0;
    DecisionBox box;
    double tau_hat = 1.0;
};

struct ObstructionVerdict {
    double epsilon = 0.0;
    double threshold = 0.0;
    double reference_value = 0.0;
    bool reference_substituted = false;
    std::vector<ObstructionStage> stages;
    Verdict flag = Verdict::NoEvidence;
};

struct ObstructionConfig {
    std::vector<double> expansion_factors{1.0, 2.0, 4.0, 8.0};
    std::size_t mc_samples = 10000;
    GridSpec grid;
    std::uint64_t seed = 0;
    std::optional<double> threshold;  // default_obstruction_threshold(mc_samples) if unset
};

/// Estimates tau(eps) on successively enlarged decision boxes (clamped to the
/// problem's expansion limit). Flags a suspected obstruction when the box
/// actually grew, tau_hat never increases from one stage to the next, and the
/// last stage is below the threshold. tau(eps) = 0 cannot be certified by
/// sampling, hence "suspected".
std::vector<ObstructionVerdict> obstruction_report(const MinmaxProblem& problem,
                                                   std::span<const double> epsilons,
                                                   const ObstructionConfig& cfg);

/// CSV with columns x (or x1..xn), t_hat.
void write_profile_csv(const TailProfile& profile, std::ostream& out);

std::string_view verdict_name(Verdict v);

}  // namespace scenario
