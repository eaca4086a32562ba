#include "stp/harness/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stp/diagnostics.hpp"
#include "stp/errors.hpp"
#include "stp/rng.hpp"
#include "stp/solvers.hpp"

namespace stp::harness {

using nlohmann::json;

bool CheckSuite::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

json CheckSuite::to_json() const {
    json checks = json::array();
    for (const auto& r : results)
        checks.push_back({{"check_name", r.name}, {"pass", r.pass}, {"statistics", r.statistics}});
    return {{"name", run_name},
            {"config_digest", config_digest},
            {"pass", all_pass()},
            {"checks", std::move(checks)},
            {"skipped", skipped}};
}

json suites_to_json(std::span<const CheckSuite> suites) {
    json runs = json::array();
    bool pass = true;
    for (const auto& s : suites) {
        runs.push_back(s.to_json());
        pass = pass && s.all_pass();
    }
    return {{"pass", pass}, {"runs", std::move(runs)}};
}

namespace {

// Non-finite statistics do not serialize to JSON numbers.
json num(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

// Like expectation_curve, but a single trajectory yields its own values.
std::vector<CurvePoint> curve(std::span<const Trajectory> trajs, CurveField field, double f_star) {
    if (trajs.size() >= 2) return expectation_curve(trajs, field, f_star);
    std::vector<CurvePoint> out;
    for (const auto& r : trajs.front().records) {
        const double v = field == CurveField::FGap        ? r.f_value - f_star
                         : field == CurveField::GradNorm ? r.grad_norm
                                                          : r.min_grad_norm;
        out.push_back({static_cast<double>(r.t), v, 0.0});
    }
    return out;
}

const CurvePoint* at_t(const std::vector<CurvePoint>& c, double t) {
    for (const auto& p : c)
        if (p.t == t) return &p;
    return nullptr;
}

CheckResult check_expected_decrease_suite(const ExperimentConfig& cfg, const ResolvedExperiment& r) {
    CheckResult out{"expected_decrease", true, {}};
    Objective<double> objective(cfg.objective, cfg.dim);
    SeededRng point_rng(mix64(cfg.base_seed ^ 0xdec7ea5eULL));
    std::vector<std::vector<double>> points{r.initial_point};
    for (int k = 0; k < 2; ++k) {
        std::vector<double> x(cfg.dim);
        for (auto& v : x) v = point_rng.normal();
        points.push_back(std::move(x));
    }
    json cases = json::array();
    std::size_t failures = 0;
    std::uint64_t case_index = 0;
    for (const auto& x : points) {
        for (double alpha : {1e-3, 1e-2, 1e-1}) {
            SeededRng rng(trajectory_seed(cfg.base_seed ^ 0x1e77a1ULL, case_index++));
            const auto res = check_expected_decrease(objective, x, alpha, cfg.distribution,
                                                     cfg.checks.decrease_samples, rng);
            if (!res.holds) ++failures;
            cases.push_back({{"alpha", alpha},
                             {"lhs_mean", num(res.lhs_mean)},
                             {"lhs_stderr", num(res.lhs_stderr)},
                             {"rhs", num(res.rhs)},
                             {"holds", res.holds}});
        }
    }
    out.pass = failures == 0;
    out.statistics = {{"samples", cfg.checks.decrease_samples}, {"failures", failures}, {"cases", cases}};
    return out;
}

void add_power_checks(CheckSuite& suite, const ExperimentConfig& cfg, double exponent,
                      std::span<const Trajectory> trajs) {
    const auto& cs = cfg.checks;
    if (exponent > 0.5 && exponent < 1.0) {
        const double rate = 1.0 - exponent;
        try {
            const auto bounded = bounded_rate_check(trajs, rate, cs.tail_slack, cs.rate_fit_window);
            const auto mean_min = mean_series(curve(trajs, CurveField::MinGradNorm, 0.0));
            const auto fit = rate_fit(mean_min, cs.rate_fit_window);
            std::size_t failing = 0;
            for (bool ok : bounded.nonincreasing) failing += ok ? 0 : 1;
            const bool slope_ok = fit.exponent_estimate <= cs.rate_fit_max_slope;
            suite.results.push_back(
                {"best_iterate_rate",
                 bounded.all_nonincreasing && slope_ok,
                 {{"exponent", rate},
                  {"slack", cs.tail_slack},
                  {"max_tail_value", num(bounded.max_tail_value)},
                  {"worst_rise", num(bounded.worst_rise)},
                  {"trajectories_not_nonincreasing", failing},
                  {"tail_nonincreasing", bounded.all_nonincreasing},
                  {"fit_slope", num(fit.exponent_estimate)},
                  {"fit_r_squared", num(fit.r_squared)},
                  {"fit_window", {fit.t_lo, fit.t_hi}},
                  {"max_slope", cs.rate_fit_max_slope},
                  {"slope_ok", slope_ok}}});
        } catch (const InsufficientData& e) {
            suite.skipped.push_back(std::string("best_iterate_rate: ") + e.what());
        }
    } else {
        suite.skipped.push_back("best_iterate_rate: exponent outside (1/2, 1)");
    }

    // Last iterate: per-trajectory head/tail medians, plus the mean gradient
    // at T against T/100.
    std::size_t failing = 0;
    double worst_ratio = 0;
    for (const auto& tr : trajs) {
        const auto res = last_iterate_check(tr, 0.1, 0.1, cs.last_iterate_ratio);
        failing += res.pass ? 0 : 1;
        if (res.head_median > 0) worst_ratio = std::max(worst_ratio, res.tail_median / res.head_median);
    }
    json stats = {{"ratio", cs.last_iterate_ratio},
                  {"trajectories_failing", failing},
                  {"worst_tail_to_head", num(worst_ratio)}};
    bool pass = failing == 0;
    const auto grad = curve(trajs, CurveField::GradNorm, 0.0);
    const double t_hi = static_cast<double>(cfg.iterations);
    const double t_lo = std::floor(t_hi / 100.0);
    const auto* hi = at_t(grad, t_hi);
    const auto* lo = t_lo >= 1 ? at_t(grad, t_lo) : nullptr;
    if (hi && lo && t_lo < t_hi) {
        stats["mean_grad_at"] = {{"t_early", t_lo}, {"early", num(lo->mean)}, {"t_late", t_hi},
                                 {"late", num(hi->mean)}};
        pass = pass && hi->mean < lo->mean;
    } else {
        stats["mean_grad_at"] = "not on grid";
    }
    suite.results.push_back({"last_iterate", pass, stats});
}

struct ReplayStats {
    std::uint64_t steps = 0;
    std::uint64_t violations = 0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    bool matches_stored = true;
};

template <class Real>
ReplayStats replay_directional(const ExperimentConfig& cfg, const ResolvedExperiment& r,
                               const Trajectory& stored, double h) {
    ReplayStats stats;
    Objective<Real> objective(cfg.objective, cfg.dim);
    const StepObserver<Real> observer = [&](const StepView<Real>& v) {
        const auto res = check_directional_step_decrease<Real>(objective, v.theta_before, v.theta_after,
                                                               v.direction, v.t, h);
        ++stats.steps;
        if (!res.holds) ++stats.violations;
        stats.worst_excess = std::max(stats.worst_excess, res.lhs - res.rhs);
    };
    const auto replayed = run_trajectory<Real>(r.solver, objective, convert_vector<Real>(r.initial_point),
                                               cfg.iterations, stored.seed, cfg.record_every, observer);
    if (replayed.records.size() != stored.records.size()) {
        stats.matches_stored = false;
    } else {
        for (std::size_t i = 0; i < replayed.records.size(); ++i) {
            auto a = replayed.records[i];
            auto b = stored.records[i];
            a.elapsed_ns = b.elapsed_ns = 0;
            if (!(a == b)) stats.matches_stored = false;
        }
    }
    return stats;
}

void add_directional_checks(CheckSuite& suite, const ExperimentConfig& cfg, const ResolvedExperiment& r,
                            std::span<const Trajectory> trajs) {
    const double h = *r.probe_base;
    const auto& info = r.objective;
    const auto& cs = cfg.checks;

    ReplayStats total;
    for (const auto& tr : trajs) {
        const auto s = r.precision == Precision::Extended
                           ? replay_directional<ExtendedReal>(cfg, r, tr, h)
                           : replay_directional<double>(cfg, r, tr, h);
        total.steps += s.steps;
        total.violations += s.violations;
        total.worst_excess = std::max(total.worst_excess, s.worst_excess);
        total.matches_stored = total.matches_stored && s.matches_stored;
    }
    suite.results.push_back({"directional_step_decrease",
                             total.violations == 0 && total.matches_stored,
                             {{"steps", total.steps},
                              {"violations", total.violations},
                              {"worst_lhs_minus_rhs", num(total.worst_excess)},
                              {"replay_matches_stored", total.matches_stored},
                              {"h", h},
                              {"precision", to_string(r.precision)}}});

    if (!info.f_star || !(info.mu > 0)) {
        suite.skipped.push_back("linear_rate: objective lacks f* or strong convexity");
        return;
    }
    const double f_star = *info.f_star;
    const double mu_D = r.constants.mu_D;
    const double q = mu_D * mu_D * info.mu / info.L;
    const auto gap = curve(trajs, CurveField::FGap, f_star);

    try {
        const double rho = geometric_rate_fit(mean_series(gap));
        const double limit = 1.0 - q + cs.linear_rate_slack;
        suite.results.push_back({"linear_rate_fit", rho <= limit,
                                 {{"rho", num(rho)}, {"limit", limit}, {"one_minus_q", 1.0 - q}}});
    } catch (const InsufficientData& e) {
        suite.skipped.push_back(std::string("linear_rate_fit: ") + e.what());
    }

    std::size_t above = 0;
    double worst = 0;
    for (const auto& p : gap) {
        const double bound = linear_rate_gap_bound(r.initial_gap, mu_D, info.mu, info.L, h,
                                                   static_cast<std::uint64_t>(p.t));
        if (!(p.mean <= bound)) ++above;
        if (bound > 0) worst = std::max(worst, p.mean / bound);
    }
    const auto& last = gap.back();
    suite.results.push_back(
        {"linear_rate_gap_bound",
         above == 0,
         {{"points_above_bound", above},
          {"worst_mean_to_bound", num(worst)},
          {"final_t", last.t},
          {"final_mean_gap", num(last.mean)},
          {"final_bound", num(linear_rate_gap_bound(r.initial_gap, mu_D, info.mu, info.L, h,
                                                    static_cast<std::uint64_t>(last.t)))}}});

    const double contraction = 1.0 - cs.linear_rate_s * q;
    std::size_t failing = 0;
    double worst_rise = 1;
    std::vector<std::uint64_t> failing_seeds;
    for (const auto& tr : trajs) {
        const auto res = scaled_gap_check(tr, f_star, contraction, 0.25, cs.tail_slack);
        if (!res.pass) {
            ++failing;
            failing_seeds.push_back(tr.run_index);
        }
        worst_rise = std::max(worst_rise, res.worst_rise);
    }
    suite.results.push_back({"per_trajectory_linear_rate",
                             failing == 0,
                             {{"s", cs.linear_rate_s},
                              {"contraction", contraction},
                              {"slack", cs.tail_slack},
                              {"trajectories_failing", failing},
                              {"failing_run_indices", failing_seeds},
                              {"worst_rise", num(worst_rise)}}});
}

void add_harmonic_checks(CheckSuite& suite, const ResolvedExperiment& r, std::span<const Trajectory> trajs) {
    if (!r.harmonic || !r.objective.f_star) {
        suite.skipped.push_back("harmonic_gap_bound: no rate constants for this objective and alpha");
        return;
    }
    const auto& hc = *r.harmonic;
    const auto gap = curve(trajs, CurveField::FGap, *r.objective.f_star);
    std::size_t above = 0;
    double worst = 0;
    for (const auto& p : gap) {
        const double bound = hc.a / p.t + 3.0 * p.std_error;
        if (!(p.mean <= bound)) ++above;
        worst = std::max(worst, p.mean / bound);
    }
    suite.results.push_back({"harmonic_gap_bound",
                             above == 0,
                             {{"R", hc.R},
                              {"alpha", hc.alpha},
                              {"a", hc.a},
                              {"points_above_bound", above},
                              {"worst_mean_to_bound", num(worst)}}});
}

}  // namespace

CheckResult check_record_invariants(std::span<const Trajectory> trajectories) {
    std::vector<std::string> problems;
    for (const auto& tr : trajectories) {
        try {
            validate_trajectory(tr);
            if (tr.records.empty() || tr.records.front().t != 1)
                throw InvalidInput("first record is not t = 1");
        } catch (const Error& e) {
            problems.push_back("run " + std::to_string(tr.run_index) + ": " + e.what());
        }
    }
    return {"record_invariants", problems.empty(),
            {{"trajectories", trajectories.size()}, {"problems", problems}}};
}

CheckResult check_monotone_descent(std::span<const Trajectory> trajectories) {
    std::vector<std::uint64_t> failing;
    for (const auto& tr : trajectories)
        if (!is_monotone(tr)) failing.push_back(tr.run_index);
    return {"monotone_descent", failing.empty(),
            {{"trajectories", trajectories.size()}, {"failing_run_indices", failing}}};
}

CheckResult check_eval_accounting(std::span<const Trajectory> trajectories, std::uint64_t per_step) {
    std::size_t mismatches = 0;
    for (const auto& tr : trajectories)
        for (const auto& rec : tr.records)
            if (rec.evals != 1 + per_step * (rec.t - 1)) ++mismatches;
    return {"eval_accounting", mismatches == 0, {{"evals_per_step", per_step}, {"mismatched_records", mismatches}}};
}

CheckResult check_progress(std::span<const Trajectory> trajectories) {
    std::vector<std::uint64_t> failing;
    for (const auto& tr : trajectories) {
        if (tr.records.size() < 2) continue;
        if (!(tr.records.back().grad_norm < tr.records.front().grad_norm)) failing.push_back(tr.run_index);
    }
    return {"progress", failing.empty(), {{"failing_run_indices", failing}}};
}

CheckSuite run_checks(const LoadedRun& run) {
    const auto& cfg = run.config;
    const auto r = resolve(cfg);
    std::span<const Trajectory> trajs = run.trajectories;
    if (trajs.empty()) throw InsufficientData("check: run has no trajectories");

    CheckSuite suite;
    suite.run_name = cfg.name;
    suite.config_digest = config_digest(cfg);

    suite.results.push_back(check_record_invariants(trajs));
    suite.results.push_back(check_eval_accounting(trajs, evals_per_step(r.solver)));
    if (std::any_of(trajs.begin(), trajs.end(), [](const Trajectory& t) { return t.records.front().grad_norm > 0; }))
        suite.results.push_back(check_progress(trajs));

    const auto* stp_params = std::get_if<StpParams>(&r.solver);
    if (stp_params || std::holds_alternative<GldParams>(r.solver))
        suite.results.push_back(check_monotone_descent(trajs));
    if (!stp_params) return suite;

    if (cfg.checks.decrease_samples > 0) suite.results.push_back(check_expected_decrease_suite(cfg, r));

    if (const auto* p = std::get_if<PowerSchedule>(&stp_params->schedule)) {
        add_power_checks(suite, cfg, p->exponent, trajs);
    } else if (std::holds_alternative<DirectionalSchedule>(stp_params->schedule)) {
        add_directional_checks(suite, cfg, r, trajs);
    } else {
        add_harmonic_checks(suite, r, trajs);
    }
    return suite;
}

}  // namespace stp::harness
