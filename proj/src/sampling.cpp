#include "scenario/sampling.hpp"

#include <cmath>
#include <numbers>

#include "scenario/error.hpp"
#include "scenario/philox.hpp"

namespace scenario {

namespace {

constexpr std::size_t kChunkRows = 1u << 14;

double uniform_word(std::uint64_t seed, std::uint64_t j) noexcept {
    return to_unit(Philox4x32::words(seed, j >> 1)[j & 1u]);
}

double gaussian_word(std::uint64_t seed, std::uint64_t j) noexcept {
    // Words 2*(j/2) and 2*(j/2)+1 are the two halves of Philox block j/2.
    const auto w0 = Philox4x32::words(seed, j >> 1);
    const double radius = std::sqrt(-2.0 * std::log(to_unit_open_zero(w0[0])));
    const double angle = 2.0 * std::numbers::pi * to_unit(w0[1]);
    return (j & 1u) == 0 ? radius * std::cos(angle) : radius * std::sin(angle);
}

}  // namespace

void sample_rows(const Uncertainty& u, std::uint64_t seed, std::size_t first, std::size_t count,
                 std::span<double> out) {
    u.validate();
    const std::size_t d = u.dim;
    if (out.size() < count * d) throw InputError("sample_rows output buffer too small");
    const std::uint64_t base = static_cast<std::uint64_t>(first) * d;
    const auto total = static_cast<std::int64_t>(count * d);
    switch (u.kind) {
        case UncertaintyKind::Cube: {
            const double a = u.halfwidth;
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < total; ++j)
                out[j] = a * (2.0 * uniform_word(seed, base + j) - 1.0);
            break;
        }
        case UncertaintyKind::Torus:
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < total; ++j) out[j] = uniform_word(seed, base + j);
            break;
        case UncertaintyKind::Gaussian:
#pragma omp parallel for schedule(static)
            for (std::int64_t j = 0; j < total; ++j) out[j] = gaussian_word(seed, base + j);
            break;
    }
}

SampleBatch sample(const Uncertainty& u, std::size_t n, std::uint64_t seed) {
    u.validate();
    SampleBatch batch{u, seed, n, std::vector<double>(n * u.dim)};
    sample_rows(u, seed, 0, n, batch.scenarios);
    return batch;
}

SampleBatch sample_uniform_cube(std::size_t d, double a, std::size_t n, std::uint64_t seed) {
    return sample(Uncertainty::cube(d, a), n, seed);
}

SampleBatch sample_gaussian(std::size_t d, std::size_t n, std::uint64_t seed) {
    return sample(Uncertainty::gaussian(d), n, seed);
}

SampleBatch sample_torus(std::size_t d, std::size_t n, std::uint64_t seed) {
    return sample(Uncertainty::torus(d), n, seed);
}

std::uint64_t spawn_substream(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(master_seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

FeatureBlock sample_features(const MinmaxProblem& problem, std::size_t n, std::uint64_t seed) {
    const Uncertainty& u = problem.uncertainty;
    u.validate();
    const std::size_t d = u.dim;
    const CostModel& model = *problem.cost;
    FeatureBlock block;
    block.rows = n;
    block.width = model.feature_width(d);
    block.values.resize(n * block.width);

    std::vector<double> raw(std::min(n, kChunkRows) * d);
    for (std::size_t first = 0; first < n; first += kChunkRows) {
        const std::size_t count = std::min(kChunkRows, n - first);
        sample_rows(u, seed, first, count, raw);
        const auto rows = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < rows; ++i) {
            model.reduce({raw.data() + i * d, d},
                         {block.values.data() + (first + i) * block.width, block.width});
        }
    }
    return block;
}

}  // namespace scenario
