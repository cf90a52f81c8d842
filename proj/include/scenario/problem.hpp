#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenario {

struct SampleBatch;

/// Axis-aligned decision set [lower, upper] in R^n. Bounds may be infinite only
/// when the box is used as an expansion limit, never as a search domain.
class DecisionBox {
public:
    DecisionBox(std::vector<double> lower, std::vector<double> upper);

    static DecisionBox interval(double lo, double hi) { return DecisionBox({lo}, {hi}); }
    static DecisionBox unbounded(std::size_t dim);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }

    bool finite() const noexcept;
    bool contains(std::span<const double> x) const noexcept;
    bool strictly_contains(const DecisionBox& inner) const noexcept;

    // Scale about the center by `factor`, then intersect with `limit`.
    DecisionBox expanded(double factor, const DecisionBox& limit) const;

    friend bool operator==(const DecisionBox&, const DecisionBox&) = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

enum class UncertaintyKind { Cube, Gaussian, Torus };

/// Distribution of the scenarios: uniform on [-a, a]^d, standard normal on R^d,
/// or uniform on the torus R^d / Z^d represented by [0, 1)^d.
struct Uncertainty {
    UncertaintyKind kind = UncertaintyKind::Cube;
    std::size_t dim = 1;
    double halfwidth = 1.0;  // cube only

    static Uncertainty cube(std::size_t d, double a = 1.0);
    static Uncertainty gaussian(std::size_t d);
    static Uncertainty torus(std::size_t d);

    void validate() const;
    std::string describe() const;

    friend bool operator==(const Uncertainty&, const Uncertainty&) = default;
};

/// Scenarios reduced to the per-scenario features a cost actually reads
/// (row-major, `rows` x `width`).
struct FeatureBlock {
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t width = 0;

    std::span<const double> row(std::size_t i) const noexcept {
        return {values.data() + i * width, width};
    }
};

/// Cost f(x, xi) split as f(x, xi) = h(x, phi(xi)). The feature map phi is
/// applied once per scenario; the grid kernels then only touch h.
class CostModel {
public:
    virtual ~CostModel() = default;

    virtual std::size_t feature_width(std::size_t scenario_dim) const = 0;
    virtual void reduce(std::span<const double> xi, std::span<double> feature) const = 0;
    virtual double cost(std::span<const double> x, std::span<const double> feature) const = 0;

    /// max over the first `count` rows of cost(x, row).
    virtual double max_cost(std::span<const double> x, const FeatureBlock& block,
                            std::size_t count) const = 0;
    /// Number of the first `count` rows with cost(x, row) > threshold.
    virtual std::size_t count_above(std::span<const double> x, const FeatureBlock& block,
                                    std::size_t count, double threshold) const = 0;
};

/// CostModel from two callables. `width == 0` means the feature is the raw
/// scenario. Loops are instantiated per callable type so the inner cost inlines.
template <class Reduce, class Cost>
class FeatureCost final : public CostModel {
public:
    FeatureCost(std::size_t width, Reduce reduce, Cost cost)
        : width_(width), reduce_(std::move(reduce)), cost_(std::move(cost)) {}

    std::size_t feature_width(std::size_t scenario_dim) const override {
        return width_ == 0 ? scenario_dim : width_;
    }
    void reduce(std::span<const double> xi, std::span<double> feature) const override {
        reduce_(xi, feature);
    }
    double cost(std::span<const double> x, std::span<const double> feature) const override {
        return cost_(x, feature);
    }
    double max_cost(std::span<const double> x, const FeatureBlock& block,
                    std::size_t count) const override {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < count; ++i) {
            const double v = cost_(x, block.row(i));
            best = v > best ? v : best;
        }
        return best;
    }
    std::size_t count_above(std::span<const double> x, const FeatureBlock& block,
                            std::size_t count, double threshold) const override {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < count; ++i) hits += cost_(x, block.row(i)) > threshold ? 1 : 0;
        return hits;
    }

private:
    std::size_t width_;
    Reduce reduce_;
    Cost cost_;
};

template <class Reduce, class Cost>
std::shared_ptr<const CostModel> make_feature_cost(std::size_t width, Reduce reduce, Cost cost) {
    return std::make_shared<const FeatureCost<Reduce, Cost>>(width, std::move(reduce),
                                                             std::move(cost));
}

using CostFunction = std::function<double(std::span<const double> x, std::span<const double> xi)>;
using MarginalFunction = std::function<double(std::span<const double> x)>;

/// Cost over raw scenarios, for user-supplied problems.
std::shared_ptr<const CostModel> make_scenario_cost(CostFunction f);

/// inf over the decision box of sup over scenarios of f(x, xi). Immutable after
/// construction; the cost must be pure.
struct MinmaxProblem {
    std::string name;
    DecisionBox decision;
    Uncertainty uncertainty;
    std::shared_ptr<const CostModel> cost;
    MarginalFunction marginal;      // g(x) = sup_xi f(x, xi); empty if unknown
    std::optional<double> optimum;  // J*
    // Obstruction diagnostics grow `decision` up to this box.
    DecisionBox expansion_limit;

    MinmaxProblem with_decision(DecisionBox box) const;
};

enum class BuiltinTag { InfnormCube, InfnormGaussian, RampGaussian, TrigToy };

std::optional<BuiltinTag> parse_builtin_tag(std::string_view name);
std::string_view builtin_name(BuiltinTag tag);

/// x in [0,1], xi uniform on [-1,1]^d, f = x |xi|_inf - |xi|_inf^2; g = x^2/4, J* = 0.
MinmaxProblem infnorm_cube(std::size_t d);
/// Same cost with standard normal xi on R^d; g = x^2/4, J* = 0.
MinmaxProblem infnorm_gaussian(std::size_t d);
/// Clamped ramp f = clamp(x - xi, -1, 0) with xi ~ N(0,1) on x in [-B, B]; g = 0, J* = 0,
/// yet every scenario value is -1.
MinmaxProblem ramp_gaussian(double box_bound = 10.0);
/// x in [-1,1], xi uniform on the circle R/Z, f = x sin(2 pi xi); g = |x|, J* = 0.
MinmaxProblem trig_toy();

/// `dim` is ignored for the one-dimensional problems.
MinmaxProblem make_builtin(BuiltinTag tag, std::size_t dim, double box_bound = 10.0);

double evaluate_cost(const MinmaxProblem& problem, std::span<const double> x,
                     std::span<const double> xi);
std::optional<double> marginal_true(const MinmaxProblem& problem, std::span<const double> x);
double sampled_marginal(const MinmaxProblem& problem, std::span<const double> x,
                        const SampleBatch& batch);

/// phi applied to every row of the batch.
FeatureBlock reduce_batch(const MinmaxProblem& problem, const SampleBatch& batch);

}  // namespace scenario
