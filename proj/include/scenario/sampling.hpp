#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scenario/problem.hpp"

namespace scenario {

/// N i.i.d. scenarios, row-major N x d, with the seed that produced them.
///
/// Entry j (flat index i*d + k) is a pure function of (seed, j): uniform kinds
/// read 64-bit word j of the Philox stream keyed by `seed`; the Gaussian kind
/// applies Box-Muller to the word pair (2*(j/2), 2*(j/2)+1) and takes the
/// cosine branch for even j and the sine branch for odd j. Consequently the
/// first n rows of a batch of size N equal the batch of size n.
struct SampleBatch {
    Uncertainty distribution;
    std::uint64_t seed = 0;
    std::size_t size = 0;
    std::vector<double> scenarios;

    std::size_t dim() const noexcept { return distribution.dim; }
    bool empty() const noexcept { return size == 0; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {scenarios.data() + i * distribution.dim, distribution.dim};
    }
};

SampleBatch sample_uniform_cube(std::size_t d, double a, std::size_t n, std::uint64_t seed);
SampleBatch sample_gaussian(std::size_t d, std::size_t n, std::uint64_t seed);
SampleBatch sample_torus(std::size_t d, std::size_t n, std::uint64_t seed);
SampleBatch sample(const Uncertainty& u, std::size_t n, std::uint64_t seed);

/// Rows [first, first + count) of the stream `sample(u, *, seed)`, written into `out`.
void sample_rows(const Uncertainty& u, std::uint64_t seed, std::size_t first, std::size_t count,
                 std::span<double> out);

/// Seed of replicate `index` under `master`. Injective in `index` for a fixed master.
std::uint64_t spawn_substream(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// reduce_batch(problem, sample(problem.uncertainty, n, seed)) without materialising
/// the raw scenarios: rows are generated and reduced in fixed-size chunks.
FeatureBlock sample_features(const MinmaxProblem& problem, std::size_t n, std::uint64_t seed);

}  // namespace scenario
