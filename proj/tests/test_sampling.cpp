#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "scenario/error.hpp"
#include "scenario/kernels.hpp"
#include "scenario/philox.hpp"
#include "scenario/problem.hpp"
#include "scenario/sampling.hpp"

using namespace scenario;

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments column_moments(const SampleBatch& b, std::size_t col) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < b.size; ++i) s += b.row(i)[col];
    const double n = static_cast<double>(b.size), m = s / n;
    for (std::size_t i = 0; i < b.size; ++i) ss += (b.row(i)[col] - m) * (b.row(i)[col] - m);
    return {m, ss / (n - 1.0)};
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("unit conversions stay in range") {
    CHECK(to_unit(0) == 0.0);
    CHECK(to_unit(~0ull) < 1.0);
    CHECK(to_unit_open_zero(0) > 0.0);
    CHECK(to_unit_open_zero(~0ull) == 1.0);
}

TEST_CASE("empty batches") {
    CHECK(sample_uniform_cube(3, 1.0, 0, 1).empty());
    CHECK(sample_gaussian(3, 0, 1).empty());
    CHECK(sample_torus(3, 0, 1).empty());
    CHECK(sample_gaussian(3, 0, 1).scenarios.empty());
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(sample_uniform_cube(0, 1.0, 10, 1), InputError);
    CHECK_THROWS_AS(sample_uniform_cube(2, 0.0, 10, 1), InputError);
    CHECK_THROWS_AS(sample_uniform_cube(2, -1.0, 10, 1), InputError);
    CHECK_THROWS_AS(sample_gaussian(0, 10, 1), InputError);
}

TEST_CASE("batches are deterministic and carry provenance") {
    for (const Uncertainty& u : {Uncertainty::cube(4, 2.5), Uncertainty::gaussian(3), Uncertainty::torus(2)}) {
        const SampleBatch a = sample(u, 1001, 77), b = sample(u, 1001, 77), c = sample(u, 1001, 78);
        CHECK(a.scenarios == b.scenarios);
        CHECK(a.scenarios != c.scenarios);
        CHECK(a.seed == 77);
        CHECK(a.size == 1001);
        CHECK(a.dim() == u.dim);
        CHECK(a.scenarios.size() == 1001 * u.dim);
    }
}

TEST_CASE("prefix property and row ranges") {
    for (const Uncertainty& u : {Uncertainty::cube(3, 1.0), Uncertainty::gaussian(3), Uncertainty::torus(5)}) {
        const SampleBatch big = sample(u, 500, 9), small = sample(u, 137, 9);
        CHECK(std::equal(small.scenarios.begin(), small.scenarios.end(), big.scenarios.begin()));
        std::vector<double> mid(50 * u.dim);
        sample_rows(u, 9, 200, 50, mid);
        CHECK(std::equal(mid.begin(), mid.end(), big.scenarios.begin() + 200 * static_cast<long>(u.dim)));
    }
}

TEST_CASE("worker count does not change a batch") {
    const int before = worker_count();
    set_worker_count(1);
    const SampleBatch a = sample_gaussian(7, 20001, 5);
    set_worker_count(4);
    const SampleBatch b = sample_gaussian(7, 20001, 5);
    set_worker_count(before);
    CHECK(a.scenarios == b.scenarios);
}

TEST_CASE("sample_features equals reducing the raw batch") {
    for (const MinmaxProblem& p : {infnorm_cube(6), infnorm_gaussian(3), ramp_gaussian(), trig_toy()}) {
        // Crosses the internal chunk boundary.
        const std::size_t n = 40000;
        const FeatureBlock direct = reduce_batch(p, sample(p.uncertainty, n, 31));
        const FeatureBlock chunked = sample_features(p, n, 31);
        CHECK(direct.rows == chunked.rows);
        CHECK(direct.width == chunked.width);
        CHECK(direct.values == chunked.values);
    }
}

TEST_CASE("uniform cube: support and moments") {
    const SampleBatch b = sample_uniform_cube(3, 2.0, 20000, 3);
    CHECK(std::all_of(b.scenarios.begin(), b.scenarios.end(), [](double v) { return v >= -2.0 && v <= 2.0; }));

    const SampleBatch one = sample_uniform_cube(1, 1.0, 100000, 11);
    const Moments m = column_moments(one, 0);
    CHECK(std::abs(m.mean) < 0.01);
    CHECK(std::abs(m.var - 1.0 / 3.0) < 0.03 / 3.0);
}

TEST_CASE("uniform cube: sub-box frequency approaches its volume fraction") {
    // [0, 0.4] x [-1, 0] has volume fraction 0.4 * 1 / 4 = 0.1 of [-1, 1]^2.
    const std::size_t n = 100000;
    const SampleBatch b = sample_uniform_cube(2, 1.0, n, 12);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = b.row(i);
        hits += (r[0] >= 0.0 && r[0] <= 0.4 && r[1] >= -1.0 && r[1] <= 0.0);
    }
    const double p = static_cast<double>(hits) / n, se = std::sqrt(0.1 * 0.9 / n);
    CHECK(std::abs(p - 0.1) < 3.0 * se);
}

TEST_CASE("gaussian: CDF checkpoints") {
    const std::size_t n = 100000;
    const SampleBatch b = sample_gaussian(1, n, 21);
    for (double z : {0.0, 1.0, -1.5, 2.0}) {
        std::size_t below = 0;
        for (double v : b.scenarios) below += v <= z;
        const double p = oracle::normal_cdf(z);
        const double se = std::sqrt(p * (1.0 - p) / n);
        CHECK(std::abs(static_cast<double>(below) / n - p) < 3.0 * se);
    }
    CHECK(std::abs(oracle::normal_cdf(1.0) - 0.8413) < 1e-4);
}

TEST_CASE("gaussian: even and odd coordinates both standard normal and uncorrelated") {
    const SampleBatch b = sample_gaussian(2, 100000, 22);
    const Moments m0 = column_moments(b, 0), m1 = column_moments(b, 1);
    CHECK(std::abs(m0.mean) < 0.01);
    CHECK(std::abs(m1.mean) < 0.01);
    CHECK(std::abs(m0.var - 1.0) < 0.02);
    CHECK(std::abs(m1.var - 1.0) < 0.02);
    double cross = 0.0;
    for (std::size_t i = 0; i < b.size; ++i) cross += b.row(i)[0] * b.row(i)[1];
    CHECK(std::abs(cross / b.size) < 0.015);
}

TEST_CASE("torus: entries in [0, 1) with mean 1/2") {
    const SampleBatch b = sample_torus(2, 100000, 23);
    CHECK(std::all_of(b.scenarios.begin(), b.scenarios.end(), [](double v) { return v >= 0.0 && v < 1.0; }));
    const Moments m = column_moments(b, 1);
    CHECK(std::abs(m.mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / 100000));
    CHECK(std::abs(m.var - 1.0 / 12.0) < 0.03 / 12.0);
}

TEST_CASE("torus matches the half-width 1/2 cube after a shift") {
    const SampleBatch t = sample_torus(3, 1000, 41), c = sample_uniform_cube(3, 0.5, 1000, 41);
    for (std::size_t i = 0; i < t.scenarios.size(); ++i)
        CHECK(std::abs(t.scenarios[i] - (c.scenarios[i] + 0.5)) < 1e-15);
}

TEST_CASE("substreams: injective and reproducible") {
    for (std::uint64_t master : {0ull, 1ull, 0xdeadbeefull, ~0ull}) {
        CHECK(spawn_substream(master, 0) != spawn_substream(master, 1));
        CHECK(spawn_substream(master, 5) == spawn_substream(master, 5));
        std::set<std::uint64_t> seen;
        for (std::uint64_t i = 0; i < 100000; ++i) seen.insert(spawn_substream(master, i));
        CHECK(seen.size() == 100000);
    }
}

TEST_CASE("substreams: first coordinates uncorrelated across replicates") {
    // Pool the pairs (replicate r, replicate r+1) row by row over 25 batches of 1000.
    const std::uint64_t master = 2024;
    std::vector<SampleBatch> batches;
    for (std::uint64_t r = 0; r < 25; ++r) batches.push_back(sample_uniform_cube(2, 1.0, 1000, spawn_substream(master, r)));
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t r = 0; r + 1 < batches.size(); ++r)
        for (std::size_t i = 0; i < 1000; ++i) {
            const double x = batches[r].row(i)[0], y = batches[r + 1].row(i)[0];
            sxy += x * y, sxx += x * x, syy += y * y;
        }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.05);

    // Adjacent substreams also should not correlate pairwise beyond sampling noise.
    for (std::size_t r = 0; r + 1 < batches.size(); ++r) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            const double x = batches[r].row(i)[0], y = batches[r + 1].row(i)[0];
            a += x * y, b += x * x, c += y * y;
        }
        CHECK(std::abs(a / std::sqrt(b * c)) < 0.15);  // ~4.7 standard errors
    }
}
