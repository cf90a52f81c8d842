#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "scenario/diagnostics.hpp"
#include "scenario/error.hpp"
#include "scenario/kernels.hpp"

using namespace scenario;

namespace {

MinmaxProblem without_closed_forms(MinmaxProblem p) {
    p.marginal = {};
    p.optimum.reset();
    return p;
}

}  // namespace

TEST_CASE("tail probability is 1 when the threshold is below every cost value") {
    // min over u in [0,1] of 0.5 u - u^2 is -0.5 > J* - 0.6.
    CHECK(tail_probability_mc(infnorm_cube(1), std::vector<double>{0.5}, 0.6, 0.0, 5000, 1) == 1.0);
    CHECK(tail_probability_mc(infnorm_cube(4), std::vector<double>{0.0}, 1.5, 0.0, 5000, 1) == 1.0);
}

TEST_CASE("ramp tail probability against the normal CDF") {
    // {f(x, xi) > -1} = {xi < x + 1}, so t(x, 1) = Phi(x + 1).
    const MinmaxProblem r = ramp_gaussian();
    const std::size_t m = 10000;
    const double tol = 3.0 / (2.0 * std::sqrt(static_cast<double>(m)));
    for (double x : {1.0, 0.0, -1.0, -2.5, -4.0}) {
        const double est = tail_probability_mc(r, std::vector<double>{x}, 1.0, 0.0, m, 5);
        CHECK(std::abs(est - oracle::normal_cdf(x + 1.0)) < tol);
    }
    // Phi(-5) ~ 2.9e-7: no hit in 10^4 draws.
    CHECK(tail_probability_mc(r, std::vector<double>{-6.0}, 1.0, 0.0, m, 5) == 0.0);
}

TEST_CASE("tail probability input checks") {
    const MinmaxProblem p = infnorm_cube(2);
    CHECK_THROWS_AS(tail_probability_mc(p, std::vector<double>{0.5}, 0.0, 0.0, 10, 1), InputError);
    CHECK_THROWS_AS(tail_probability_mc(p, std::vector<double>{0.5}, -1.0, 0.0, 10, 1), InputError);
    CHECK_THROWS_AS(tail_probability_mc(p, std::vector<double>{0.5}, 0.1, 0.0, 0, 1), InputError);
    CHECK_THROWS_AS(tail_probability_mc(p, std::vector<double>{2.0}, 0.1, 0.0, 10, 1), InputError);
    CHECK_THROWS_AS(worst_case_tail_mc(p, std::vector<double>{0.5}, 0.0, 10, 1), InputError);
    CHECK_THROWS_AS(inf_tail_probability(p, -0.1, 0.0, {}, 10, 1), InputError);
}

TEST_CASE("worst-case tail examples") {
    const TailEstimate big = worst_case_tail_mc(infnorm_cube(3), std::vector<double>{0.3}, 10.0, 4000, 2);
    CHECK(big.value == 1.0);
    CHECK(big.standard_error == 0.0);
    CHECK_FALSE(big.marginal_substituted);

    // x = 1, eps = 1/4: {u - u^2 > 0} = {0 < u < 1}, probability one.
    const TailEstimate e = worst_case_tail_mc(infnorm_cube(1), std::vector<double>{1.0}, 0.25, 10000, 3);
    CHECK(e.value == 1.0);

    // trig_toy, x = 1, eps = 1/2: {sin(2 pi xi) > 1/2} has probability 1/3.
    const TailEstimate t = worst_case_tail_mc(trig_toy(), std::vector<double>{1.0}, 0.5, 100000, 4);
    CHECK(std::abs(t.value - 1.0 / 3.0) < 3.0 * t.standard_error);
    CHECK(t.mc_samples == 100000);
}

TEST_CASE("worst-case tail substitutes a sampled marginal when g is unknown") {
    const MinmaxProblem p = without_closed_forms(infnorm_cube(2));
    const TailEstimate e = worst_case_tail_mc(p, std::vector<double>{0.5}, 0.1, 5000, 6);
    CHECK(e.marginal_substituted);
    const TailEstimate known = worst_case_tail_mc(infnorm_cube(2), std::vector<double>{0.5}, 0.1, 5000, 6);
    CHECK(std::abs(e.value - known.value) < 0.02);
}

TEST_CASE("worst-case events sit inside the optimum-level events") {
    // J* <= g(x) puts the threshold g(x) - eps above J* - eps, so on a shared
    // stream t_wc_hat(x) <= t_hat(x) point by point.
    for (const MinmaxProblem& p : {infnorm_cube(1), infnorm_cube(5), infnorm_gaussian(2), ramp_gaussian(3.0), trig_toy()}) {
        for (double eps : {0.05, 0.3, 1.0}) {
            const TailProfile t = inf_tail_probability(p, eps, *p.optimum, {101}, 5000, 7);
            const TailProfile w = inf_worst_case_tail(p, eps, {101}, 5000, 7);
            for (std::size_t k = 0; k < t.t_hat.size(); ++k) CHECK(w.t_hat[k] <= t.t_hat[k]);
            CHECK(w.tau_hat <= t.tau_hat);
        }
    }
}

TEST_CASE("the reversed inclusion fails on trig_toy") {
    // At x = 1, eps = 1/2: t(1, 1/2) = P(sin > -1/2) = 2/3 while t_wc(1, 1/2) = 1/3,
    // so t(x, eps) <= t_wc(x, eps) cannot hold in general.
    const MinmaxProblem p = trig_toy();
    const std::size_t m = 100000;
    const double t = tail_probability_mc(p, std::vector<double>{1.0}, 0.5, 0.0, m, 9);
    const double w = worst_case_tail_mc(p, std::vector<double>{1.0}, 0.5, m, 9).value;
    const double se = std::sqrt(0.25 / static_cast<double>(m));
    CHECK(std::abs(t - 2.0 / 3.0) < 4.0 * se);
    CHECK(std::abs(w - 1.0 / 3.0) < 4.0 * se);
    CHECK(t > w + 3.0 * std::sqrt(2.0) * se);
}

TEST_CASE("profile invariants") {
    const MinmaxProblem p = infnorm_cube(3);
    const TailProfile t = inf_tail_probability(p, 0.1, 0.0, {51}, 3000, 11);
    CHECK(t.grid.size() == 51);
    CHECK(t.t_hat.size() == 51);
    CHECK(std::all_of(t.t_hat.begin(), t.t_hat.end(), [](double v) { return v >= 0.0 && v <= 1.0; }));
    CHECK(t.tau_hat == *std::min_element(t.t_hat.begin(), t.t_hat.end()));
    CHECK(t.t_hat[t.argmin] == t.tau_hat);
    CHECK(t.mc_samples == 3000);
    CHECK(t.seed == 11);
    CHECK(t.reference_value == 0.0);
    CHECK(t.standard_error() == doctest::Approx(std::sqrt(t.tau_hat * (1 - t.tau_hat) / 3000)));

    // Same seed, same answer; the profile agrees with the pointwise estimator.
    const TailProfile again = inf_tail_probability(p, 0.1, 0.0, {51}, 3000, 11);
    CHECK(again.t_hat == t.t_hat);
    for (std::size_t k = 0; k < 51; k += 10)
        CHECK(tail_probability_mc(p, t.grid.point(k), 0.1, 0.0, 3000, 11) == t.t_hat[k]);
}

TEST_CASE("epsilon monotonicity is exact under common random numbers") {
    for (const MinmaxProblem& p : {infnorm_cube(2), ramp_gaussian(4.0), trig_toy()}) {
        const std::vector<double> eps{0.01, 0.05, 0.2, 0.5, 1.0, 1.5};
        std::vector<TailProfile> ps;
        for (double e : eps) ps.push_back(inf_tail_probability(p, e, *p.optimum, {81}, 4000, 13));
        for (std::size_t i = 1; i < ps.size(); ++i) {
            for (std::size_t k = 0; k < ps[i].t_hat.size(); ++k) CHECK(ps[i - 1].t_hat[k] <= ps[i].t_hat[k]);
            CHECK(ps[i - 1].tau_hat <= ps[i].tau_hat);
        }
    }
}

TEST_CASE("compact box keeps tau positive for infnorm_cube") {
    // t(x, 0.3) is smallest at x = 0, where it equals P(u^2 < 0.3) = sqrt(0.3).
    const TailProfile t = inf_tail_probability(infnorm_cube(1), 0.3, 0.0, {201}, 100000, 17);
    CHECK(t.tau_hat > 0.01);
    CHECK(std::abs(t.tau_hat - std::sqrt(0.3)) < 3.0 * t.standard_error() + 1e-3);
    for (std::size_t d : {2u, 5u})
        for (double eps : {0.05, 0.2}) CHECK(inf_tail_probability(infnorm_cube(d), eps, 0.0, {101}, 100000, 18).tau_hat > 0.0);
}

TEST_CASE("ramp: tau over [-B, B] is Phi(1 - B) and vanishes as B grows") {
    double prev = 1.0;
    for (double b : {1.0, 2.0, 3.0, 4.0}) {
        const TailProfile t = inf_tail_probability(ramp_gaussian(b), 1.0, 0.0, {201}, 100000, 19);
        const double truth = oracle::normal_cdf(1.0 - b);
        CHECK(std::abs(t.tau_hat - truth) < 3.0 * std::sqrt(truth * (1 - truth) / 1e5) + 1e-4);
        CHECK(t.grid.point(t.argmin)[0] == -b);
        CHECK(t.tau_hat <= prev);
        prev = t.tau_hat;
    }
}

TEST_CASE("reference value: known optimum or a recorded substitution") {
    const ReferenceValue known = reference_value(infnorm_cube(3), 1);
    CHECK(known.value == 0.0);
    CHECK_FALSE(known.substituted);
    const ReferenceValue sub = reference_value(without_closed_forms(infnorm_cube(3)), 1);
    CHECK(sub.substituted);
    CHECK(sub.value <= 0.0);
    CHECK(sub.value > -0.05);  // (min over 10^4 draws of u)^2 is tiny
}

TEST_CASE("obstruction report: ramp is flagged") {
    ObstructionConfig cfg;
    cfg.mc_samples = 10000;
    cfg.seed = 3;
    const auto v = obstruction_report(ramp_gaussian(2.0), std::vector<double>{1.0}, cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].flag == Verdict::SuspectedObstruction);
    CHECK(v[0].threshold == doctest::Approx(0.05));
    REQUIRE(v[0].stages.size() == 4);
    CHECK(v[0].stages[3].box == DecisionBox::interval(-16.0, 16.0));
    CHECK(std::abs(v[0].stages[0].tau_hat - oracle::normal_cdf(-1.0)) < 0.015);
    CHECK(v[0].stages[3].tau_hat == 0.0);
    CHECK(verdict_name(v[0].flag) == "suspected_obstruction");
}

TEST_CASE("obstruction report: clamped infnorm box gives no evidence") {
    ObstructionConfig cfg;
    cfg.mc_samples = 100000;
    cfg.seed = 4;
    const auto v = obstruction_report(infnorm_cube(5), std::vector<double>{0.2}, cfg);
    CHECK(v[0].flag == Verdict::NoEvidence);
    for (const auto& s : v[0].stages) {
        CHECK(s.box == DecisionBox::interval(0.0, 1.0));
        CHECK(s.tau_hat > 0.01);
    }
    CHECK(verdict_name(v[0].flag) == "no_evidence");
}

TEST_CASE("obstruction report: tau = 1 everywhere gives no evidence") {
    ObstructionConfig cfg;
    cfg.mc_samples = 2000;
    const auto v = obstruction_report(ramp_gaussian(2.0), std::vector<double>{1.5, 3.0}, cfg);
    REQUIRE(v.size() == 2);
    for (const auto& s : v[1].stages) CHECK(s.tau_hat == 1.0);
    CHECK(v[1].flag == Verdict::NoEvidence);
}

TEST_CASE("obstruction report: a box that cannot grow is never flagged") {
    ObstructionConfig cfg;
    cfg.mc_samples = 2000;
    cfg.threshold = 2.0;  // every tau is below it
    const auto v = obstruction_report(infnorm_cube(1), std::vector<double>{0.1}, cfg);
    CHECK(v[0].flag == Verdict::NoEvidence);
}

TEST_CASE("obstruction report input checks") {
    ObstructionConfig cfg;
    const MinmaxProblem p = ramp_gaussian(2.0);
    CHECK_THROWS_AS(obstruction_report(p, std::vector<double>{}, cfg), InputError);
    CHECK_THROWS_AS(obstruction_report(p, std::vector<double>{0.0}, cfg), InputError);
    cfg.expansion_factors = {1.0, 4.0, 2.0};
    CHECK_THROWS_AS(obstruction_report(p, std::vector<double>{1.0}, cfg), InputError);
    cfg.expansion_factors = {};
    CHECK_THROWS_AS(obstruction_report(p, std::vector<double>{1.0}, cfg), InputError);
    CHECK(default_obstruction_threshold(100000) == doctest::Approx(10.0 / (2.0 * std::sqrt(1e5))));
    CHECK_THROWS_AS(default_obstruction_threshold(0), InputError);
}

TEST_CASE("profile CSV layout") {
    const TailProfile t = inf_tail_probability(trig_toy(), 0.5, 0.0, {5}, 100, 1);
    std::ostringstream out;
    write_profile_csv(t, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,t_hat");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 1);
    }
    CHECK(rows == 5);
    CHECK(out.str().find("-1,") != std::string::npos);
}
