#include "scenario/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scenario/error.hpp"

namespace scenario {

namespace {

// raw values within this relative distance above an integer round down to it,
// provided the resulting n still meets the target.
constexpr double kCeilSlack = 1e-12;
constexpr double kMaxRaw = 0x1.0p53;

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw InputError("confidence beta must lie in (0, 1)");
}

void check_eps(double eps) {
    if (!(eps > 0.0 && std::isfinite(eps))) throw InputError("accuracy epsilon must be positive");
}

void check_tau(double tau, const char* what) {
    if (std::isnan(tau)) throw InputError(std::string(what) + " is NaN");
    if (tau <= 0.0)
        throw InconsistentRegime(std::string(what) +
                                 " <= 0: the tail probability vanishes, so no finite sample size "
                                 "controls the scenario error (consistency obstruction)");
    if (tau > 1.0) throw InputError(std::string(what) + " must not exceed 1");
}

std::uint64_t ceil_raw(double raw) {
    if (!std::isfinite(raw) || raw > kMaxRaw) throw InputError("required sample size is not representable");
    if (raw <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::ceil(raw * (1.0 - kCeilSlack)));
}

// Smallest n near ceil(raw) whose PAC bound meets beta.
std::uint64_t ceil_with_bound(double raw, double log_covering, double tau, double beta) {
    std::uint64_t n = ceil_raw(raw);
    if (pac_failure_bound(log_covering, tau, n) > beta) n = static_cast<std::uint64_t>(std::ceil(raw));
    while (pac_failure_bound(log_covering, tau, n) > beta) ++n;
    return n;
}

// ln(1/beta) + 2q ln(1/eps) + (2q-1) ln q + q ln(c pi L^2)
double class_numerator(double log_beta_inv, std::uint64_t q, double eps, double c, double l2) {
    const double qd = static_cast<double>(q);
    return log_beta_inv - 2.0 * qd * std::log(eps) + (2.0 * qd - 1.0) * std::log(qd) +
           qd * std::log(c * std::numbers::pi * l2 * l2);
}

double log_sum_exp(double a, double b) {
    if (a == -INFINITY) return b;
    if (b == -INFINITY) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

std::string_view family_name(PlanFamily family) {
    switch (family) {
        case PlanFamily::Generic: return "generic";
        case PlanFamily::Trig: return "trig";
        case PlanFamily::Smooth: return "smooth";
        case PlanFamily::Convex: return "convex";
    }
    return "unknown";
}

double pac_failure_bound(double log_covering, double tau, std::uint64_t n) {
    const double e = log_covering - static_cast<double>(n) * tau;
    return e >= 0.0 ? 1.0 : std::exp(e);
}

PlanResult plan_generic(double log_covering_at_eps4, double tau_at_eps4, double beta) {
    check_beta(beta);
    check_tau(tau_at_eps4, "tau(eps/4)");
    if (!std::isfinite(log_covering_at_eps4)) throw InputError("ln C must be finite");
    PlanResult r;
    r.family = PlanFamily::Generic;
    r.tau = tau_at_eps4;
    r.log_beta_inv = -std::log(beta);
    r.log_covering = log_covering_at_eps4;
    r.raw = (r.log_beta_inv + log_covering_at_eps4) / tau_at_eps4;
    r.n_required = ceil_with_bound(r.raw, r.log_covering, r.tau, beta);
    return r;
}

PlanResult plan_trig(const TrigClassSpec& spec, double eps, double beta, double tau) {
    spec.validate();
    check_eps(eps);
    check_beta(beta);
    check_tau(tau, "tau(eps/4)");
    PlanResult r;
    r.family = PlanFamily::Trig;
    r.tau = tau;
    r.q = spec.class_dimension();
    r.log_beta_inv = -std::log(beta);
    const double numerator = class_numerator(r.log_beta_inv, r.q, eps, 32.0, spec.l2_bound);
    r.log_covering = numerator - r.log_beta_inv;
    r.raw = numerator / tau;
    r.n_required = ceil_with_bound(r.raw, r.log_covering, tau, beta);
    return r;
}

PlanResult plan_smooth(const SmoothTorusSpec& spec, double eps, double beta, double tau) {
    check_eps(eps);
    check_beta(beta);
    check_tau(tau, "tau(eps/4)");
    PlanResult r;
    r.family = PlanFamily::Smooth;
    r.tau = tau;
    r.q = smooth_covering_bound(spec, eps).q_effective;
    r.log_beta_inv = -std::log(beta);
    const double numerator = class_numerator(r.log_beta_inv, r.q, eps, 288.0, spec.l2_bound);
    r.log_covering = numerator - r.log_beta_inv;
    r.raw = numerator / tau;
    r.raw_alt_constant = class_numerator(r.log_beta_inv, r.q, eps, 72.0, spec.l2_bound) / tau;
    r.n_required = ceil_with_bound(r.raw, r.log_covering, tau, beta);
    return r;
}

double log_binomial_tail(std::uint64_t n, unsigned n_dim, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("binomial tail needs eps in (0, 1)");
    if (n_dim < 1) throw InputError("binomial tail needs n_dim >= 1");
    if (n < n_dim) return 0.0;  // every outcome has fewer than n_dim successes
    const double nd = static_cast<double>(n);
    const double le = std::log(eps), l1e = std::log1p(-eps);
    double acc = -INFINITY;
    for (unsigned i = 0; i < n_dim; ++i) {
        const double id = i;
        const double term = std::lgamma(nd + 1.0) - std::lgamma(id + 1.0) -
                            std::lgamma(nd - id + 1.0) + id * le + (nd - id) * l1e;
        acc = log_sum_exp(acc, term);
    }
    return std::min(acc, 0.0);
}

ConvexSampleBound convex_sample_bound(double eps_tilde, double beta, unsigned n_dim) {
    if (!(eps_tilde > 0.0 && eps_tilde < 1.0)) throw InputError("eps_tilde must lie in (0, 1)");
    check_beta(beta);
    if (n_dim < 1) throw InputError("n_dim must be >= 1");
    const double log_beta = std::log(beta);
    auto ok = [&](std::uint64_t n) { return log_binomial_tail(n, n_dim, eps_tilde) <= log_beta; };

    // The tail is nonincreasing in N, so bracket by doubling then bisect.
    std::uint64_t hi = n_dim;
    while (!ok(hi)) {
        if (hi > (std::uint64_t{1} << 52)) throw InputError("convex sample size is not representable");
        hi *= 2;
    }
    // ok(lo) is false: below n_dim the tail is 1.
    std::uint64_t lo = hi == n_dim ? n_dim - 1 : hi / 2;
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    ConvexSampleBound out;
    out.exact = hi;
    out.explicit_bound = (2.0 / eps_tilde) * (-log_beta + static_cast<double>(n_dim));
    return out;
}

PlanResult convex_plan(double eps, double beta, unsigned n_dim, double tau_wc) {
    check_eps(eps);
    check_beta(beta);
    if (n_dim < 1) throw InputError("n_dim must be >= 1");
    check_tau(tau_wc, "tau_wc(eps)");
    PlanResult r;
    r.family = PlanFamily::Convex;
    r.tau = tau_wc;
    r.log_beta_inv = -std::log(beta);
    r.log_covering = n_dim;
    r.raw = (2.0 / tau_wc) * (r.log_beta_inv + static_cast<double>(n_dim));
    r.n_required = ceil_raw(r.raw);
    return r;
}

}  // namespace scenario
