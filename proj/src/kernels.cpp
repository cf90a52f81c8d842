#include "scenario/kernels.hpp"

#include <omp.h>

#include <cstdint>

#include "scenario/error.hpp"

namespace scenario {

DecisionGrid make_grid(const DecisionBox& box, std::size_t per_dim) {
    if (per_dim < 2) throw InputError("grid needs at least 2 points per dimension");
    if (!box.finite()) throw InputError("cannot grid an unbounded decision box");
    const std::size_t n = box.dim();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > (std::size_t{1} << 32) / per_dim) throw InputError("decision grid too large");
        total *= per_dim;
    }
    DecisionGrid grid{n, per_dim, std::vector<double>(total * n)};
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t k = 0; k < total; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(digit[i]) / static_cast<double>(per_dim - 1);
            // Endpoints are hit exactly.
            grid.points[k * n + i] = digit[i] + 1 == per_dim
                                         ? box.upper()[i]
                                         : box.lower()[i] + t * (box.upper()[i] - box.lower()[i]);
        }
        for (std::size_t i = n; i-- > 0;) {
            if (++digit[i] < per_dim) break;
            digit[i] = 0;
        }
    }
    return grid;
}

void set_worker_count(int workers) {
    if (workers < 1) throw InputError("worker count must be >= 1");
    omp_set_num_threads(workers);
}

int worker_count() { return omp_get_max_threads(); }

namespace kernels {

namespace {

void check_block(const DecisionGrid& grid, const FeatureBlock& block, std::size_t count) {
    if (count > block.rows) throw InputError("kernel row count exceeds the feature block");
    if (grid.size() == 0) throw InputError("empty decision grid");
}

}  // namespace

std::vector<double> max_cost_on_grid(const CostModel& model, const DecisionGrid& grid,
                                     const FeatureBlock& block, std::size_t count) {
    check_block(grid, block, count);
    std::vector<double> out(grid.size());
    const auto points = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < points; ++k) out[k] = model.max_cost(grid.point(k), block, count);
    return out;
}

std::vector<double> max_cost_on_grid_serial(const CostModel& model, const DecisionGrid& grid,
                                            const FeatureBlock& block, std::size_t count) {
    check_block(grid, block, count);
    std::vector<double> out(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < count; ++i) {
            const double v = model.cost(grid.point(k), block.row(i));
            if (v > best) best = v;
        }
        out[k] = best;
    }
    return out;
}

std::vector<std::size_t> count_above_on_grid(const CostModel& model, const DecisionGrid& grid,
                                             const FeatureBlock& block, std::size_t count,
                                             std::span<const double> thresholds) {
    check_block(grid, block, count);
    if (thresholds.size() != grid.size()) throw InputError("one threshold per grid point required");
    std::vector<std::size_t> out(grid.size());
    const auto points = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < points; ++k)
        out[k] = model.count_above(grid.point(k), block, count, thresholds[k]);
    return out;
}

std::vector<std::size_t> count_above_on_grid_serial(const CostModel& model,
                                                    const DecisionGrid& grid,
                                                    const FeatureBlock& block, std::size_t count,
                                                    std::span<const double> thresholds) {
    check_block(grid, block, count);
    if (thresholds.size() != grid.size()) throw InputError("one threshold per grid point required");
    std::vector<std::size_t> out(grid.size(), 0);
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (std::size_t i = 0; i < count; ++i)
            if (model.cost(grid.point(k), block.row(i)) > thresholds[k]) ++out[k];
    return out;
}

std::size_t argmin_first(std::span<const double> values) {
    if (values.empty()) throw InputError("argmin of an empty range");
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] < values[best]) best = k;
    return best;
}

}  // namespace kernels
}  // namespace scenario
