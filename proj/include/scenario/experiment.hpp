#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "scenario/engine.hpp"
#include "scenario/problem.hpp"

namespace scenario {

struct ExperimentSpec {
    BuiltinTag problem = BuiltinTag::InfnormCube;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> sizes;  // strictly increasing
    std::size_t replicates = 25;
    std::uint64_t master_seed = 0;
    MinimizerConfig minimizer;
    double box_bound = 10.0;

    void validate() const;
};

struct ErrorRow {
    std::size_t d = 0;
    std::size_t n = 0;
    double mean_error = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(replicates)
    std::size_t replicates = 0;
    std::uint64_t seed = 0;  // seed of dimension d; replicate r uses spawn_substream(seed, r)

    bool operator==(const ErrorRow&) const = default;
};

struct ErrorSurface {
    std::vector<ErrorRow> rows;  // sorted by (d, n)

    bool operator==(const ErrorSurface&) const = default;
};

/// Seed of dimension d under `master`.
std::uint64_t dimension_seed(std::uint64_t master_seed, std::size_t d) noexcept;

/// Mean of J* - J_N over replicates for each (d, N). Replicate r of dimension d
/// draws one stream and evaluates every N on its prefixes, so within a replicate
/// the error is nonincreasing in N. Throws Unavailable if J* is unknown.
ErrorSurface run_error_surface(const ExperimentSpec& spec);

void write_csv(const ErrorSurface& surface, std::ostream& out);
std::string to_csv(const ErrorSurface& surface);
ErrorSurface parse_csv(std::istream& in);

/// Log-log error-vs-N chart, one polyline per d. Rows with nonpositive error
/// or N cannot be placed on a log axis and are skipped.
std::string render_svg(const ErrorSurface& surface);

/// Throw IoError naming `path` on failure.
void emit_csv(const ErrorSurface& surface, const std::filesystem::path& path);
void emit_plot(const ErrorSurface& surface, const std::filesystem::path& path);

}  // namespace scenario
