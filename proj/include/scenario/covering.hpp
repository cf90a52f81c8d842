#pragma once

#include <cstdint>

namespace scenario {

/// Cost slices f(x, .) that are trigonometric polynomials of bandwidth `order`
/// on a `dim`-dimensional cube, with L2 norm at most `l2_bound`.
struct TrigClassSpec {
    unsigned order = 0;
    unsigned dim = 1;
    double l2_bound = 1.0;

    void validate() const;
    /// q = (2 order + 1)^dim
    std::uint64_t class_dimension() const;
};

/// Cost slices that are C^s on the d-torus with L2 norm <= l2_bound and
/// sum_i || d^s f / d xi_i^s ||_2 <= derivative_bound. Requires 2s > d.
struct SmoothTorusSpec {
    unsigned smoothness = 1;
    unsigned dim = 1;
    double l2_bound = 1.0;
    double derivative_bound = 1.0;

    void validate() const;
};

/// Upper bound on a sup-norm covering number, kept as a natural log.
struct CoveringBound {
    double log_value = 0.0;
    std::uint64_t q_effective = 1;
    double radius = 0.0;  // covering radius the bound refers to
};

/// ln[(1/q) (pi q^2 / 2)^q (eps / 2L)^(-2q)], radius eps.
CoveringBound trig_covering_bound(const TrigClassSpec& spec, double eps);

/// sqrt(2) Lt 2^d (2 pi)^(-s) N^(-(2s-d)/2): sup-norm error of truncating the
/// Fourier series to frequencies in [-N, N]^d.
double truncation_error_bound(const SmoothTorusSpec& spec, std::uint64_t level);

/// Smallest N >= 1 with truncation_error_bound(spec, N) <= eps.
std::uint64_t torus_truncation_level(const SmoothTorusSpec& spec, double eps);

/// Covering bound at radius eps/4 for the smooth class, via truncation at eps/12
/// and the trig bound: q = (2 N(eps/12) + 1)^d and
/// ln[(1/q) (pi q^2 / 2)^q (eps / 24 L)^(-2q)].
CoveringBound smooth_covering_bound(const SmoothTorusSpec& spec, double eps);

/// Number of integer vectors in Z^d with infinity norm exactly m:
/// (2m+1)^d - (2m-1)^d. Throws InputError if it does not fit in 64 bits.
std::uint64_t shell_count(std::uint64_t m, unsigned d);

/// 2 / N^(2s-d), an upper bound on sum_{m > N} m^-(2s-d+1).
double tail_sum_bound(std::uint64_t n, unsigned s, unsigned d);

}  // namespace scenario
