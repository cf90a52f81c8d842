// Command-line front end: solve, plan, diagnose, cover, experiment.
// Exit codes: 0 ok, 2 input error, 3 inconsistent regime, 4 I/O failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scenario/covering.hpp"
#include "scenario/diagnostics.hpp"
#include "scenario/engine.hpp"
#include "scenario/error.hpp"
#include "scenario/experiment.hpp"
#include "scenario/kernels.hpp"
#include "scenario/planner.hpp"
#include "scenario/problem.hpp"
#include "scenario/sampling.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace scenario;

constexpr std::size_t kDeskScaleLimit = 100000;

struct Options {
    std::string problem = "infnorm_cube";
    std::vector<std::size_t> dims{1};
    std::vector<std::size_t> samples{1000};
    std::size_t replicates = 25;
    std::uint64_t seed = 0;
    std::vector<double> epsilons{0.1};
    double beta = 0.1;
    std::size_t mc_samples = 10000;
    std::string out;
    std::string format;
    std::string config;
    int threads = 0;
    bool full_scale = false;
    double box_bound = 10.0;
    std::string plot;
    std::size_t grid = 2001;
    std::size_t tail_grid = 201;
    std::vector<double> factors{1.0, 2.0, 4.0, 8.0};
    std::optional<double> threshold;

    // plan and cover
    std::string family = "trig";
    unsigned order = 1;
    unsigned class_dim = 1;
    double l2 = 1.0 / std::sqrt(2.0);  // trig_toy: ||x sin(2 pi .)||_2 <= 1/sqrt(2)
    unsigned smoothness = 1;
    double derivative_bound = 1.0;
    unsigned n_dim = 1;
    std::optional<double> tau;
    std::optional<double> tau_wc;
    std::optional<double> log_covering;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const Options& o, const std::string& body) {
    if (o.out.empty() || o.out == "-") {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + o.out + " for writing");
    f << body;
    f.flush();
    if (!f) throw IoError("write to " + o.out + " failed");
}

std::string format_or(const Options& o, const char* fallback) {
    return o.format.empty() ? fallback : o.format;
}

BuiltinTag problem_tag(const Options& o) {
    const auto tag = parse_builtin_tag(o.problem);
    if (!tag) throw InputError("unknown problem '" + o.problem + "'");
    return *tag;
}

MinmaxProblem problem_of(const Options& o) {
    return make_builtin(problem_tag(o), o.dims.front(), o.box_bound);
}

MinimizerConfig minimizer_of(const Options& o) {
    MinimizerConfig cfg;
    cfg.grid_points_per_dim = o.grid;
    return cfg;
}

void check_scale(const Options& o) {
    for (std::size_t n : o.samples)
        if (n > kDeskScaleLimit && !o.full_scale)
            throw InputError("N = " + std::to_string(n) + " exceeds the desk-scale limit of " +
                             std::to_string(kDeskScaleLimit) + "; pass --full-scale");
}

// Options of one subcommand, so config-file values can be applied to the ones
// left unset on the command line.
void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--problem", o.problem, "infnorm_cube | infnorm_gaussian | ramp_gaussian | trig_toy");
    sub->add_option("--dim", o.dims, "uncertainty dimension(s)")->delimiter(',');
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", o.config, "JSON file mirroring the flags; flags win");
    sub->add_option("--threads", o.threads, "worker count (0 = runtime default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--box-bound", o.box_bound, "decision bound B of ramp_gaussian");
    sub->add_option("--grid", o.grid, "minimizer grid points per decision axis");
}

void apply_config(CLI::App* sub) {
    const auto* cfg_opt = sub->get_option_no_throw("--config");
    if (!cfg_opt || cfg_opt->count() == 0) return;
    const std::string path = cfg_opt->as<std::string>();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("config " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw InputError("config " + path + " must be a JSON object");
    auto as_text = [](const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
        return v.dump();
    };
    for (const auto& [key, value] : doc.items()) {
        if (key == "config") continue;
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) throw InputError("config " + path + ": unknown key '" + key + "' for " + sub->get_name());
        if (opt->count() > 0) continue;
        std::vector<std::string> results;
        if (value.is_array())
            for (const json& v : value) results.push_back(as_text(v));
        else
            results.push_back(as_text(value));
        opt->add_result(results);
        opt->run_callback();
    }
}

json box_json(const DecisionBox& b) { return {{"lower", b.lower()}, {"upper", b.upper()}}; }

int run_solve(const Options& o) {
    check_scale(o);
    const MinmaxProblem p = problem_of(o);
    const auto sols = nested_run(p, o.seed, o.samples, minimizer_of(o));
    std::ostringstream s;
    if (format_or(o, "json") == "csv") {
        s << "N,value,";
        for (std::size_t i = 0; i < p.decision.dim(); ++i) s << "x" << (i + 1) << ",";
        s << "error\n";
        for (const auto& sol : sols) {
            s << sol.sample_size << ',' << num(sol.value) << ',';
            for (double x : sol.minimizer) s << num(x) << ',';
            s << (p.optimum ? num(error_vs_true(sol, p)) : std::string("nan")) << '\n';
        }
    } else {
        json doc = {{"problem", p.name}, {"seed", o.seed}, {"optimum", p.optimum ? json(*p.optimum) : json()}};
        json rows = json::array();
        for (const auto& sol : sols)
            rows.push_back({{"N", sol.sample_size},
                            {"value", sol.value},
                            {"minimizer", sol.minimizer},
                            {"error", p.optimum ? json(error_vs_true(sol, p)) : json()}});
        doc["solutions"] = rows;
        s << doc.dump(2) << '\n';
    }
    emit(o, s.str());
    return 0;
}

double estimate_tau(const Options& o, double eps) {
    const MinmaxProblem p = problem_of(o);
    const ReferenceValue ref = reference_value(p, o.seed);
    return inf_tail_probability(p, eps, ref.value, {o.tail_grid}, o.mc_samples, o.seed).tau_hat;
}

double estimate_tau_wc(const Options& o, double eps) {
    const MinmaxProblem p = problem_of(o);
    return inf_worst_case_tail(p, eps, {o.tail_grid}, o.mc_samples, o.seed).tau_hat;
}

json plan_json(const PlanResult& r) {
    json j = {{"family", family_name(r.family)},
              {"n_required", r.n_required},
              {"raw", r.raw},
              {"tau", r.tau},
              {"log_beta_inv", r.log_beta_inv},
              {"log_covering", r.log_covering}};
    if (r.q) j["q"] = r.q;
    if (r.raw_alt_constant) j["raw_alt_constant_72"] = *r.raw_alt_constant;
    return j;
}

int run_plan(const Options& o) {
    const double eps = o.epsilons.front();
    json doc = {{"epsilon", eps}, {"beta", o.beta}};
    std::vector<PlanResult> plans;
    auto tau_eps4 = [&] {
        if (o.tau) return *o.tau;
        const double t = estimate_tau(o, eps / 4.0);
        doc["tau_source"] = "estimated on " + o.problem + " at eps/4";
        return t;
    };
    auto tau_wc = [&] {
        if (o.tau_wc) return *o.tau_wc;
        const double t = estimate_tau_wc(o, eps);
        doc["tau_wc_source"] = "estimated on " + o.problem + " at eps";
        return t;
    };
    const TrigClassSpec trig{o.order, o.class_dim, o.l2};
    if (o.family == "generic") {
        if (!o.log_covering) throw InputError("plan generic needs --log-covering");
        plans.push_back(plan_generic(*o.log_covering, tau_eps4(), o.beta));
    } else if (o.family == "trig") {
        plans.push_back(plan_trig(trig, eps, o.beta, tau_eps4()));
    } else if (o.family == "smooth") {
        plans.push_back(plan_smooth({o.smoothness, o.class_dim, o.l2, o.derivative_bound}, eps, o.beta, tau_eps4()));
    } else if (o.family == "convex") {
        plans.push_back(convex_plan(eps, o.beta, o.n_dim, tau_wc()));
    } else if (o.family == "compare") {
        plans.push_back(plan_trig(trig, eps, o.beta, tau_eps4()));
        plans.push_back(convex_plan(eps, o.beta, o.n_dim, tau_wc()));
    } else {
        throw InputError("unknown plan family '" + o.family + "'");
    }
    if (o.family == "convex" && eps < 1.0) {
        const ConvexSampleBound b = convex_sample_bound(eps, o.beta, o.n_dim);
        doc["convex_sample_bound"] = {{"epsilon_tilde", eps}, {"exact", b.exact}, {"explicit", b.explicit_bound}};
    }
    std::ostringstream s;
    if (format_or(o, "json") == "csv") {
        s << "family,n_required,raw,tau,log_beta_inv,log_covering,q\n";
        for (const auto& r : plans)
            s << family_name(r.family) << ',' << r.n_required << ',' << num(r.raw) << ',' << num(r.tau) << ','
              << num(r.log_beta_inv) << ',' << num(r.log_covering) << ',' << r.q << '\n';
    } else {
        json arr = json::array();
        for (const auto& r : plans) arr.push_back(plan_json(r));
        doc["plans"] = arr;
        s << doc.dump(2) << '\n';
    }
    emit(o, s.str());
    return 0;
}

int run_diagnose(const Options& o) {
    const MinmaxProblem p = problem_of(o);
    const ReferenceValue ref = reference_value(p, o.seed);
    std::vector<TailProfile> profiles;
    for (double eps : o.epsilons)
        profiles.push_back(inf_tail_probability(p, eps, ref.value, {o.tail_grid}, o.mc_samples, o.seed));

    std::ostringstream s;
    if (format_or(o, "json") == "csv") {
        write_profile_csv(profiles.front(), s);
        emit(o, s.str());
        return 0;
    }
    ObstructionConfig cfg;
    cfg.expansion_factors = o.factors;
    cfg.mc_samples = o.mc_samples;
    cfg.grid = {o.tail_grid};
    cfg.seed = o.seed;
    cfg.threshold = o.threshold;
    const auto verdicts = obstruction_report(p, o.epsilons, cfg);

    json doc = {{"problem", p.name},
                {"seed", o.seed},
                {"mc_samples", o.mc_samples},
                {"reference_value", ref.value},
                {"reference_substituted", ref.substituted}};
    json tails = json::array();
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const TailProfile& t = profiles[i];
        const TailProfile wc = inf_worst_case_tail(p, o.epsilons[i], {o.tail_grid}, o.mc_samples, o.seed);
        const auto x = t.grid.point(t.argmin);
        tails.push_back({{"epsilon", t.epsilon},
                         {"tau_hat", t.tau_hat},
                         {"standard_error", t.standard_error()},
                         {"argmin", std::vector<double>(x.begin(), x.end())},
                         {"tau_wc_hat", wc.tau_hat},
                         {"marginal_substituted", wc.reference_substituted}});
    }
    doc["tails"] = tails;
    json obs = json::array();
    for (const auto& v : verdicts) {
        json stages = json::array();
        for (const auto& st : v.stages)
            stages.push_back({{"factor", st.factor}, {"box", box_json(st.box)}, {"tau_hat", st.tau_hat}});
        obs.push_back({{"epsilon", v.epsilon},
                       {"threshold", v.threshold},
                       {"stages", stages},
                       {"verdict", verdict_name(v.flag)}});
    }
    doc["obstruction"] = obs;
    s << doc.dump(2) << '\n';
    emit(o, s.str());
    return 0;
}

int run_cover(const Options& o) {
    const bool csv = format_or(o, "csv") == "csv";
    json rows = json::array();
    std::ostringstream s;
    if (csv) s << "family,epsilon,q,log_covering,radius,truncation_level\n";
    for (double eps : o.epsilons) {
        CoveringBound b;
        std::uint64_t level = 0;
        if (o.family == "trig") {
            b = trig_covering_bound({o.order, o.class_dim, o.l2}, eps);
        } else if (o.family == "smooth") {
            const SmoothTorusSpec spec{o.smoothness, o.class_dim, o.l2, o.derivative_bound};
            b = smooth_covering_bound(spec, eps);
            level = torus_truncation_level(spec, eps / 12.0);
        } else {
            throw InputError("cover supports families trig and smooth");
        }
        if (csv)
            s << o.family << ',' << num(eps) << ',' << b.q_effective << ',' << num(b.log_value) << ','
              << num(b.radius) << ',' << level << '\n';
        else
            rows.push_back({{"family", o.family},
                            {"epsilon", eps},
                            {"q", b.q_effective},
                            {"log_covering", b.log_value},
                            {"radius", b.radius},
                            {"truncation_level", level}});
    }
    if (!csv) s << rows.dump(2) << '\n';
    emit(o, s.str());
    return 0;
}

int run_experiment(const Options& o) {
    check_scale(o);
    ExperimentSpec spec;
    spec.problem = problem_tag(o);
    spec.dims = o.dims;
    spec.sizes = o.samples;
    spec.replicates = o.replicates;
    spec.master_seed = o.seed;
    spec.minimizer = minimizer_of(o);
    spec.box_bound = o.box_bound;
    const ErrorSurface surface = run_error_surface(spec);
    if (format_or(o, "csv") == "csv") {
        emit(o, to_csv(surface));
    } else {
        json rows = json::array();
        for (const auto& r : surface.rows)
            rows.push_back({{"d", r.d},
                            {"N", r.n},
                            {"mean_error", r.mean_error},
                            {"std_error", r.std_error},
                            {"replicates", r.replicates},
                            {"seed", r.seed}});
        emit(o, json{{"problem", o.problem}, {"rows", rows}}.dump(2) + "\n");
    }
    if (!o.plot.empty()) emit_plot(surface, o.plot);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Scenario approximation of robust minmax problems"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "scenario values J_N on nested prefixes of one stream");
    add_common(solve, o);
    solve->add_option("--samples", o.samples, "sample size(s) N")->delimiter(',');
    solve->add_flag("--full-scale", o.full_scale, "allow N above the desk-scale limit");

    auto* plan = app.add_subcommand("plan", "a priori sample sizes");
    add_common(plan, o);
    plan->add_option("--family", o.family)->check(CLI::IsMember({"generic", "trig", "smooth", "convex", "compare"}));
    plan->add_option("--epsilon", o.epsilons, "accuracy")->delimiter(',');
    plan->add_option("--beta", o.beta, "confidence parameter");
    plan->add_option("--tau", o.tau, "tau(eps/4); estimated on --problem when absent");
    plan->add_option("--tau-wc", o.tau_wc, "tau_wc(eps); estimated on --problem when absent");
    plan->add_option("--log-covering", o.log_covering, "ln C(eps/4) for the generic family");
    plan->add_option("--order", o.order, "trig bandwidth omega");
    plan->add_option("--class-dim", o.class_dim, "dimension of the function class domain");
    plan->add_option("--l2", o.l2, "L2 bound L");
    plan->add_option("--smoothness", o.smoothness);
    plan->add_option("--derivative-bound", o.derivative_bound);
    plan->add_option("--n-dim", o.n_dim, "decision dimension for the convex family");
    plan->add_option("--mc-samples", o.mc_samples, "Monte Carlo draws for tau estimates");
    plan->add_option("--tail-grid", o.tail_grid, "decision grid points per axis for tau estimates");

    auto* diagnose = app.add_subcommand("diagnose", "tail profiles and obstruction report");
    add_common(diagnose, o);
    diagnose->add_option("--epsilon", o.epsilons, "accuracy level(s)")->delimiter(',');
    diagnose->add_option("--mc-samples", o.mc_samples, "Monte Carlo draws M");
    diagnose->add_option("--tail-grid", o.tail_grid, "decision grid points per axis");
    diagnose->add_option("--factors", o.factors, "box expansion factors")->delimiter(',');
    diagnose->add_option("--threshold", o.threshold, "obstruction threshold (default 10 standard errors)");

    auto* cover = app.add_subcommand("cover", "covering-number tables");
    add_common(cover, o);
    cover->add_option("--family", o.family)->check(CLI::IsMember({"trig", "smooth"}));
    cover->add_option("--epsilon", o.epsilons, "radius level(s)")->delimiter(',');
    cover->add_option("--order", o.order);
    cover->add_option("--class-dim", o.class_dim);
    cover->add_option("--l2", o.l2);
    cover->add_option("--smoothness", o.smoothness);
    cover->add_option("--derivative-bound", o.derivative_bound);

    auto* experiment = app.add_subcommand("experiment", "mean error surfaces over (d, N)");
    add_common(experiment, o);
    experiment->add_option("--samples", o.samples, "ascending sample sizes N")->delimiter(',');
    experiment->add_option("--replicates", o.replicates);
    experiment->add_option("--plot", o.plot, "also write an SVG chart here");
    experiment->add_flag("--full-scale", o.full_scale, "allow N above the desk-scale limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        apply_config(sub);
        if (o.threads > 0) set_worker_count(o.threads);
        if (o.dims.empty() || o.epsilons.empty() || o.samples.empty())
            throw InputError("--dim, --epsilon and --samples need at least one value");
        if (sub == solve) return run_solve(o);
        if (sub == plan) return run_plan(o);
        if (sub == diagnose) return run_diagnose(o);
        if (sub == cover) return run_cover(o);
        return run_experiment(o);
    } catch (const InconsistentRegime& e) {
        std::cerr << "inconsistent regime: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 4;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const Unavailable& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    }
}
