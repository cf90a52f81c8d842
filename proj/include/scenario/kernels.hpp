#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scenario/problem.hpp"

namespace scenario {

/// Tensor grid over a finite decision box, `per_dim` points per axis including
/// both endpoints. Points are stored in lexicographic order (first coordinate
/// most significant), so a lower index means a lexicographically smaller point.
struct DecisionGrid {
    std::size_t dim = 0;
    std::size_t per_dim = 0;
    std::vector<double> points;

    std::size_t size() const noexcept { return dim == 0 ? 0 : points.size() / dim; }
    std::span<const double> point(std::size_t i) const noexcept {
        return {points.data() + i * dim, dim};
    }
};

DecisionGrid make_grid(const DecisionBox& box, std::size_t per_dim);

void set_worker_count(int workers);
int worker_count();

// The grid kernels come in pairs: an OpenMP version used by the library and a
// plain loop kept as the reference. Each grid point is computed independently,
// so both produce identical output for any worker count.
namespace kernels {

/// out[k] = max over the first `count` rows of cost(grid point k, row).
std::vector<double> max_cost_on_grid(const CostModel& model, const DecisionGrid& grid,
                                     const FeatureBlock& block, std::size_t count);
std::vector<double> max_cost_on_grid_serial(const CostModel& model, const DecisionGrid& grid,
                                            const FeatureBlock& block, std::size_t count);

/// out[k] = #{ i < count : cost(grid point k, row i) > thresholds[k] }.
std::vector<std::size_t> count_above_on_grid(const CostModel& model, const DecisionGrid& grid,
                                             const FeatureBlock& block, std::size_t count,
                                             std::span<const double> thresholds);
std::vector<std::size_t> count_above_on_grid_serial(const CostModel& model,
                                                    const DecisionGrid& grid,
                                                    const FeatureBlock& block, std::size_t count,
                                                    std::span<const double> thresholds);

/// Index of the smallest value; ties resolve to the lowest index.
std::size_t argmin_first(std::span<const double> values);

}  // namespace kernels
}  // namespace scenario
