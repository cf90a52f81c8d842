#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "scenario/covering.hpp"

namespace scenario {

enum class PlanFamily { Generic, Trig, Smooth, Convex };

std::string_view family_name(PlanFamily family);

/// A priori sample count and the quantities it was computed from.
struct PlanResult {
    std::uint64_t n_required = 0;  // max(0, ceil(raw))
    PlanFamily family = PlanFamily::Generic;
    double raw = 0.0;
    double tau = 0.0;
    double log_beta_inv = 0.0;
    double log_covering = 0.0;  // ln C(eps/4); n_dim for the convex family
    std::uint64_t q = 0;        // class dimension (trig/smooth only)
    // Smooth family only: raw recomputed with the ln(72 pi L^2) constant
    // instead of ln(288 pi L^2). Reported, never used for n_required.
    std::optional<double> raw_alt_constant;
};

/// min(1, exp(lnC - N tau)).
double pac_failure_bound(double log_covering, double tau, std::uint64_t n);

/// raw = (ln(1/beta) + lnC) / tau. Throws InconsistentRegime when tau <= 0.
PlanResult plan_generic(double log_covering_at_eps4, double tau_at_eps4, double beta);

/// raw = [ln(1/beta) + 2q ln(1/eps) + (2q-1) ln q + q ln(32 pi L^2)] / tau.
PlanResult plan_trig(const TrigClassSpec& spec, double eps, double beta, double tau);

/// raw = [ln(1/beta) + 2q ln(1/eps) + (2q-1) ln q + q ln(288 pi L^2)] / tau with
/// q = (2 N(eps/12) + 1)^d.
PlanResult plan_smooth(const SmoothTorusSpec& spec, double eps, double beta, double tau);

struct ConvexSampleBound {
    std::uint64_t exact = 0;      // min N with binomial tail <= beta
    double explicit_bound = 0.0;  // (2/eps) (ln(1/beta) + n_dim)
};

/// ln sum_{i < n_dim} C(N, i) eps^i (1-eps)^(N-i).
double log_binomial_tail(std::uint64_t n, unsigned n_dim, double eps);

ConvexSampleBound convex_sample_bound(double eps_tilde, double beta, unsigned n_dim);

/// raw = (2 / tau_wc) (ln(1/beta) + n_dim).
PlanResult convex_plan(double eps, double beta, unsigned n_dim, double tau_wc);

}  // namespace scenario
