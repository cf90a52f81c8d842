#include "scenario/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "scenario/error.hpp"
#include "scenario/sampling.hpp"

namespace scenario {

DecisionBox::DecisionBox(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw InputError("decision box needs at least one coordinate");
    if (lower_.size() != upper_.size())
        throw InputError("decision box bounds have different lengths");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (std::isnan(lower_[i]) || std::isnan(upper_[i]) || lower_[i] > upper_[i]) {
            std::ostringstream msg;
            msg << "decision box coordinate " << i << " has lower " << lower_[i] << " > upper "
                << upper_[i];
            throw InputError(msg.str());
        }
    }
}

DecisionBox DecisionBox::unbounded(std::size_t dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return DecisionBox(std::vector<double>(dim, -inf), std::vector<double>(dim, inf));
}

bool DecisionBox::finite() const noexcept {
    return std::all_of(lower_.begin(), lower_.end(), [](double v) { return std::isfinite(v); }) &&
           std::all_of(upper_.begin(), upper_.end(), [](double v) { return std::isfinite(v); });
}

bool DecisionBox::contains(std::span<const double> x) const noexcept {
    if (x.size() != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
    return true;
}

bool DecisionBox::strictly_contains(const DecisionBox& inner) const noexcept {
    if (inner.dim() != dim()) return false;
    bool larger = false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (inner.lower_[i] < lower_[i] || inner.upper_[i] > upper_[i]) return false;
        larger = larger || lower_[i] < inner.lower_[i] || upper_[i] > inner.upper_[i];
    }
    return larger;
}

DecisionBox DecisionBox::expanded(double factor, const DecisionBox& limit) const {
    if (!(factor > 0.0)) throw InputError("box expansion factor must be positive");
    if (limit.dim() != dim()) throw InputError("expansion limit dimension mismatch");
    std::vector<double> lo(dim()), hi(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        const double center = 0.5 * (lower_[i] + upper_[i]);
        const double half = 0.5 * (upper_[i] - lower_[i]) * factor;
        lo[i] = std::max(center - half, limit.lower_[i]);
        hi[i] = std::min(center + half, limit.upper_[i]);
    }
    return DecisionBox(std::move(lo), std::move(hi));
}

Uncertainty Uncertainty::cube(std::size_t d, double a) {
    Uncertainty u{UncertaintyKind::Cube, d, a};
    u.validate();
    return u;
}

Uncertainty Uncertainty::gaussian(std::size_t d) {
    Uncertainty u{UncertaintyKind::Gaussian, d, 1.0};
    u.validate();
    return u;
}

Uncertainty Uncertainty::torus(std::size_t d) {
    Uncertainty u{UncertaintyKind::Torus, d, 0.5};
    u.validate();
    return u;
}

void Uncertainty::validate() const {
    if (dim < 1) throw InputError("uncertainty dimension must be >= 1");
    if (kind == UncertaintyKind::Cube && !(halfwidth > 0.0 && std::isfinite(halfwidth)))
        throw InputError("cube halfwidth must be positive and finite");
}

std::string Uncertainty::describe() const {
    std::ostringstream out;
    switch (kind) {
        case UncertaintyKind::Cube: out << "cube(a=" << halfwidth << ", d=" << dim << ")"; break;
        case UncertaintyKind::Gaussian: out << "gaussian(d=" << dim << ")"; break;
        case UncertaintyKind::Torus: out << "torus(d=" << dim << ")"; break;
    }
    return out.str();
}

MinmaxProblem MinmaxProblem::with_decision(DecisionBox box) const {
    if (box.dim() != decision.dim()) throw InputError("replacement decision box has wrong dimension");
    MinmaxProblem copy = *this;
    copy.decision = std::move(box);
    return copy;
}

std::shared_ptr<const CostModel> make_scenario_cost(CostFunction f) {
    if (!f) throw InputError("cost function is empty");
    return make_feature_cost(
        0, [](std::span<const double> xi, std::span<double> out) { std::ranges::copy(xi, out.begin()); },
        std::move(f));
}

namespace {

double infnorm(std::span<const double> v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

std::shared_ptr<const CostModel> infnorm_cost() {
    return make_feature_cost(
        1, [](std::span<const double> xi, std::span<double> out) { out[0] = infnorm(xi); },
        [](std::span<const double> x, std::span<const double> u) { return x[0] * u[0] - u[0] * u[0]; });
}

MinmaxProblem infnorm_problem(std::string name, Uncertainty u) {
    const DecisionBox box = DecisionBox::interval(0.0, 1.0);
    return MinmaxProblem{std::move(name),
                         box,
                         u,
                         infnorm_cost(),
                         [](std::span<const double> x) { return 0.25 * x[0] * x[0]; },
                         0.0,
                         box};
}

}  // namespace

MinmaxProblem infnorm_cube(std::size_t d) {
    return infnorm_problem("infnorm_cube", Uncertainty::cube(d, 1.0));
}

MinmaxProblem infnorm_gaussian(std::size_t d) {
    return infnorm_problem("infnorm_gaussian", Uncertainty::gaussian(d));
}

MinmaxProblem ramp_gaussian(double box_bound) {
    if (!(box_bound > 0.0 && std::isfinite(box_bound)))
        throw InputError("ramp box bound must be positive and finite");
    // 0 for x >= xi, x - xi on [xi - 1, xi], -1 for x <= xi - 1.
    auto cost = make_feature_cost(
        1, [](std::span<const double> xi, std::span<double> out) { out[0] = xi[0]; },
        [](std::span<const double> x, std::span<const double> xi) {
            const double d = x[0] - xi[0];
            return d >= 0.0 ? 0.0 : (d <= -1.0 ? -1.0 : d);
        });
    return MinmaxProblem{"ramp_gaussian",
                         DecisionBox::interval(-box_bound, box_bound),
                         Uncertainty::gaussian(1),
                         std::move(cost),
                         [](std::span<const double>) { return 0.0; },
                         0.0,
                         DecisionBox::unbounded(1)};
}

MinmaxProblem trig_toy() {
    auto cost = make_feature_cost(
        1,
        [](std::span<const double> xi, std::span<double> out) {
            out[0] = std::sin(2.0 * std::numbers::pi * xi[0]);
        },
        [](std::span<const double> x, std::span<const double> s) { return x[0] * s[0]; });
    const DecisionBox box = DecisionBox::interval(-1.0, 1.0);
    return MinmaxProblem{"trig_toy",
                         box,
                         Uncertainty::torus(1),
                         std::move(cost),
                         [](std::span<const double> x) { return std::abs(x[0]); },
                         0.0,
                         box};
}

std::optional<BuiltinTag> parse_builtin_tag(std::string_view name) {
    if (name == "infnorm_cube") return BuiltinTag::InfnormCube;
    if (name == "infnorm_gaussian") return BuiltinTag::InfnormGaussian;
    if (name == "ramp_gaussian") return BuiltinTag::RampGaussian;
    if (name == "trig_toy") return BuiltinTag::TrigToy;
    return std::nullopt;
}

std::string_view builtin_name(BuiltinTag tag) {
    switch (tag) {
        case BuiltinTag::InfnormCube: return "infnorm_cube";
        case BuiltinTag::InfnormGaussian: return "infnorm_gaussian";
        case BuiltinTag::RampGaussian: return "ramp_gaussian";
        case BuiltinTag::TrigToy: return "trig_toy";
    }
    return "unknown";
}

MinmaxProblem make_builtin(BuiltinTag tag, std::size_t dim, double box_bound) {
    switch (tag) {
        case BuiltinTag::InfnormCube: return infnorm_cube(dim);
        case BuiltinTag::InfnormGaussian: return infnorm_gaussian(dim);
        case BuiltinTag::RampGaussian: return ramp_gaussian(box_bound);
        case BuiltinTag::TrigToy: return trig_toy();
    }
    throw InputError("unknown builtin problem");
}

namespace {

void check_decision(const MinmaxProblem& problem, std::span<const double> x) {
    if (x.size() != problem.decision.dim()) {
        std::ostringstream msg;
        msg << problem.name << ": decision has dimension " << x.size() << ", expected "
            << problem.decision.dim();
        throw InputError(msg.str());
    }
    if (!problem.decision.contains(x)) throw InputError(problem.name + ": decision outside the box");
}

void check_scenario(const MinmaxProblem& problem, std::span<const double> xi) {
    if (xi.size() != problem.uncertainty.dim) {
        std::ostringstream msg;
        msg << problem.name << ": scenario has dimension " << xi.size() << ", expected "
            << problem.uncertainty.dim;
        throw InputError(msg.str());
    }
}

}  // namespace

double evaluate_cost(const MinmaxProblem& problem, std::span<const double> x,
                     std::span<const double> xi) {
    check_decision(problem, x);
    check_scenario(problem, xi);
    std::vector<double> feature(problem.cost->feature_width(xi.size()));
    problem.cost->reduce(xi, feature);
    return problem.cost->cost(x, feature);
}

std::optional<double> marginal_true(const MinmaxProblem& problem, std::span<const double> x) {
    check_decision(problem, x);
    if (!problem.marginal) return std::nullopt;
    return problem.marginal(x);
}

double sampled_marginal(const MinmaxProblem& problem, std::span<const double> x,
                        const SampleBatch& batch) {
    check_decision(problem, x);
    if (batch.empty()) throw InputError("sampled marginal of an empty batch");
    if (batch.dim() != problem.uncertainty.dim)
        throw InputError(problem.name + ": batch dimension does not match the uncertainty");
    const FeatureBlock block = reduce_batch(problem, batch);
    return problem.cost->max_cost(x, block, block.rows);
}

FeatureBlock reduce_batch(const MinmaxProblem& problem, const SampleBatch& batch) {
    if (batch.dim() != problem.uncertainty.dim)
        throw InputError(problem.name + ": batch dimension does not match the uncertainty");
    FeatureBlock block;
    block.rows = batch.size;
    block.width = problem.cost->feature_width(batch.dim());
    block.values.resize(block.rows * block.width);
    for (std::size_t i = 0; i < batch.size; ++i)
        problem.cost->reduce(batch.row(i), {block.values.data() + i * block.width, block.width});
    return block;
}

}  // namespace scenario
