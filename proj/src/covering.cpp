#include "scenario/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "scenario/error.hpp"

namespace scenario {

namespace {

// Rounding slack when an exact-arithmetic equality lands on a truncation boundary.
constexpr double kBoundarySlack = 1e-12;
constexpr std::uint64_t kMaxClassDimension = std::uint64_t{1} << 53;

std::uint64_t checked_pow(std::uint64_t base, unsigned exp, std::uint64_t cap, const char* what) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) throw InputError(what);
        r *= base;
    }
    return r;
}

// ln[(1/q) (pi q^2/2)^q (radius_ratio)^(-2q)] with radius_ratio = eps / (c L).
double log_trig_bound(std::uint64_t q, double log_ratio) {
    const double qd = static_cast<double>(q);
    return -std::log(qd) + qd * std::log(std::numbers::pi * qd * qd / 2.0) - 2.0 * qd * log_ratio;
}

}  // namespace

void TrigClassSpec::validate() const {
    if (dim < 1) throw InputError("trig class dimension must be >= 1");
    if (!(l2_bound > 0.0 && std::isfinite(l2_bound))) throw InputError("L2 bound must be positive");
    (void)class_dimension();
}

std::uint64_t TrigClassSpec::class_dimension() const {
    return checked_pow(2ull * order + 1, dim, kMaxClassDimension, "trig class dimension overflows");
}

void SmoothTorusSpec::validate() const {
    if (dim < 1) throw InputError("torus dimension must be >= 1");
    if (smoothness < 1) throw InputError("smoothness must be >= 1");
    if (2 * smoothness <= dim) throw InputError("smooth torus class needs 2s > d");
    if (!(l2_bound > 0.0 && std::isfinite(l2_bound))) throw InputError("L2 bound must be positive");
    if (!(derivative_bound > 0.0 && std::isfinite(derivative_bound)))
        throw InputError("derivative bound must be positive");
}

CoveringBound trig_covering_bound(const TrigClassSpec& spec, double eps) {
    spec.validate();
    if (!(eps > 0.0)) throw InputError("covering radius must be positive");
    const std::uint64_t q = spec.class_dimension();
    return {log_trig_bound(q, std::log(eps) - std::log(2.0 * spec.l2_bound)), q, eps};
}

double truncation_error_bound(const SmoothTorusSpec& spec, std::uint64_t level) {
    spec.validate();
    if (level < 1) throw InputError("truncation level must be >= 1");
    const double s = spec.smoothness, d = spec.dim;
    const double log_const = 0.5 * std::log(2.0) + std::log(spec.derivative_bound) +
                             d * std::log(2.0) - s * std::log(2.0 * std::numbers::pi);
    return std::exp(log_const - 0.5 * (2.0 * s - d) * std::log(static_cast<double>(level)));
}

std::uint64_t torus_truncation_level(const SmoothTorusSpec& spec, double eps) {
    spec.validate();
    if (!(eps > 0.0)) throw InputError("truncation accuracy must be positive");
    const double s = spec.smoothness, d = spec.dim;
    const double log_const = 0.5 * std::log(2.0) + std::log(spec.derivative_bound) +
                             d * std::log(2.0) - s * std::log(2.0 * std::numbers::pi);
    const double log_level = (2.0 / (2.0 * s - d)) * (log_const - std::log(eps));
    if (log_level > std::log(0x1.0p62)) throw InputError("truncation level overflows");
    std::uint64_t n = log_level <= 0.0 ? 1 : static_cast<std::uint64_t>(std::ceil(std::exp(log_level)));
    n = std::max<std::uint64_t>(n, 1);
    auto ok = [&](std::uint64_t level) {
        return truncation_error_bound(spec, level) <= eps * (1.0 + kBoundarySlack);
    };
    while (n > 1 && ok(n - 1)) --n;
    while (!ok(n)) ++n;
    return n;
}

CoveringBound smooth_covering_bound(const SmoothTorusSpec& spec, double eps) {
    spec.validate();
    if (!(eps > 0.0)) throw InputError("covering accuracy must be positive");
    const std::uint64_t level = torus_truncation_level(spec, eps / 12.0);
    if (level > kMaxClassDimension / 2) throw InputError("smooth class dimension overflows");
    const std::uint64_t q =
        checked_pow(2 * level + 1, spec.dim, kMaxClassDimension, "smooth class dimension overflows");
    return {log_trig_bound(q, std::log(eps) - std::log(24.0 * spec.l2_bound)), q, eps / 4.0};
}

std::uint64_t shell_count(std::uint64_t m, unsigned d) {
    if (m < 1) throw InputError("shell index m must be >= 1");
    if (d < 1) throw InputError("shell dimension must be >= 1");
    __extension__ typedef unsigned __int128 u128;
    const u128 cap = ~u128{0} >> 1;
    auto pow128 = [&](u128 base) {
        u128 r = 1;
        for (unsigned i = 0; i < d; ++i) {
            if (r > cap / base) throw InputError("shell count overflows 64 bits");
            r *= base;
        }
        return r;
    };
    const u128 diff = pow128(u128{2} * m + 1) - pow128(u128{2} * m - 1);
    if (diff > std::numeric_limits<std::uint64_t>::max())
        throw InputError("shell count overflows 64 bits");
    return static_cast<std::uint64_t>(diff);
}

double tail_sum_bound(std::uint64_t n, unsigned s, unsigned d) {
    if (n < 1) throw InputError("tail sum start must be >= 1");
    if (2 * s <= d) throw InputError("tail sum bound needs 2s > d");
    return 2.0 / std::pow(static_cast<double>(n), static_cast<double>(2 * s - d));
}

}  // namespace scenario
