#include "stp/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "stp/errors.hpp"

namespace stp::harness {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::string& where,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path, "missing required key");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path, std::string("wrong type: ") + e.what());
    }
}

template <class T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
    if (!j.contains(key)) return fallback;
    return get<T>(j, key, path);
}

std::uint64_t positive(std::uint64_t v, const std::string& path) {
    if (v == 0) throw ConfigError(path, "must be >= 1");
    return v;
}

// Accepts both {"name": "x", ...} and the shorthand "x".
json as_object(const json& j, const std::string& path) {
    if (j.is_string()) return json{{"name", j}};
    if (!j.is_object()) throw ConfigError(path, "expected an object or a name");
    return j;
}

InitialPoint parse_initial_point(const json& j) {
    InitialPoint p;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "zeros") p.kind = InitialPoint::Kind::Zeros;
        else if (s == "ones") p.kind = InitialPoint::Kind::Ones;
        else throw ConfigError("initial_point", "unknown initial point '" + s + "'");
    } else if (j.is_array()) {
        p.kind = InitialPoint::Kind::Explicit;
        p.values = j.get<std::vector<double>>();
    } else if (j.is_object()) {
        reject_unknown_keys(j, "initial_point", {"level"});
        p.kind = InitialPoint::Kind::Level;
        p.level = get<double>(j, "level", "initial_point.level");
        if (!(p.level >= 0)) throw ConfigError("initial_point.level", "must be >= 0");
    } else {
        throw ConfigError("initial_point", "expected \"zeros\", \"ones\", {\"level\": c} or an array");
    }
    return p;
}

SolverSpec parse_solver(const json& raw) {
    const json j = as_object(raw, "solver");
    SolverSpec s;
    const auto name = get<std::string>(j, "name", "solver.name");
    if (name == "stp") {
        reject_unknown_keys(j, "solver", {"name"});
        s.kind = SolverSpec::Kind::Stp;
    } else if (name == "rgf") {
        reject_unknown_keys(j, "solver", {"name", "mu_fd", "h_step"});
        s.kind = SolverSpec::Kind::Rgf;
        s.smoothing = get_or(j, "mu_fd", "solver.mu_fd", s.smoothing);
        s.step = get_or(j, "h_step", "solver.h_step", s.step);
        if (!(s.smoothing > 0)) throw ConfigError("solver.mu_fd", "must be > 0");
        if (!(s.step > 0)) throw ConfigError("solver.h_step", "must be > 0");
    } else if (name == "gld") {
        reject_unknown_keys(j, "solver", {"name", "r_min", "r_max"});
        s.kind = SolverSpec::Kind::Gld;
        s.r_min = get_or(j, "r_min", "solver.r_min", s.r_min);
        s.r_max = get_or(j, "r_max", "solver.r_max", s.r_max);
        if (!(s.r_min > 0 && s.r_max > s.r_min))
            throw ConfigError("solver.r_min", "need 0 < r_min < r_max");
    } else {
        throw ConfigError("solver.name", "unknown solver '" + name + "'");
    }
    return s;
}

ScheduleSpec parse_schedule(const json& raw) {
    const json j = as_object(raw, "schedule");
    ScheduleSpec s;
    const auto name = get<std::string>(j, "name", "schedule.name");
    if (name == "power") {
        reject_unknown_keys(j, "schedule", {"name", "alpha", "exponent"});
        s.kind = ScheduleSpec::Kind::Power;
        s.alpha = get<double>(j, "alpha", "schedule.alpha");
        s.exponent = get<double>(j, "exponent", "schedule.exponent");
        if (!(*s.alpha > 0)) throw ConfigError("schedule.alpha", "must be > 0");
        if (!(s.exponent > 0 && s.exponent <= 1))
            throw ConfigError("schedule.exponent", "must lie in (0, 1]");
    } else if (name == "harmonic") {
        reject_unknown_keys(j, "schedule", {"name", "alpha"});
        s.kind = ScheduleSpec::Kind::Harmonic;
        if (j.contains("alpha") && !(j["alpha"].is_string() && j["alpha"] == "auto")) {
            s.alpha = get<double>(j, "alpha", "schedule.alpha");
            if (!(*s.alpha > 0)) throw ConfigError("schedule.alpha", "must be > 0");
        }
    } else if (name == "directional") {
        reject_unknown_keys(j, "schedule", {"name", "h"});
        s.kind = ScheduleSpec::Kind::Directional;
        if (j.contains("h") && !j["h"].is_null()) {
            s.h = get<double>(j, "h", "schedule.h");
            if (!(*s.h > 1)) throw ConfigError("schedule.h", "must be > 1");
        }
    } else {
        throw ConfigError("schedule.name", "unknown schedule '" + name + "'");
    }
    return s;
}

CheckSettings parse_checks(const json& j) {
    reject_unknown_keys(j, "checks",
                        {"decrease_samples", "rate_fit_max_slope", "rate_fit_window", "tail_slack",
                         "last_iterate_ratio", "linear_rate_slack", "linear_rate_s",
                         "sublevel_probes"});
    CheckSettings c;
    c.decrease_samples = get_or(j, "decrease_samples", "checks.decrease_samples", c.decrease_samples);
    c.rate_fit_max_slope = get_or(j, "rate_fit_max_slope", "checks.rate_fit_max_slope", c.rate_fit_max_slope);
    c.rate_fit_window = get_or(j, "rate_fit_window", "checks.rate_fit_window", c.rate_fit_window);
    c.tail_slack = get_or(j, "tail_slack", "checks.tail_slack", c.tail_slack);
    c.last_iterate_ratio = get_or(j, "last_iterate_ratio", "checks.last_iterate_ratio", c.last_iterate_ratio);
    c.linear_rate_slack = get_or(j, "linear_rate_slack", "checks.linear_rate_slack", c.linear_rate_slack);
    c.linear_rate_s = get_or(j, "linear_rate_s", "checks.linear_rate_s", c.linear_rate_s);
    c.sublevel_probes = get_or(j, "sublevel_probes", "checks.sublevel_probes", c.sublevel_probes);
    if (c.decrease_samples != 0 && c.decrease_samples < 1000)
        throw ConfigError("checks.decrease_samples", "must be 0 (skip) or >= 1000");
    if (!(c.linear_rate_s > 0 && c.linear_rate_s < 1))
        throw ConfigError("checks.linear_rate_s", "must lie in (0, 1)");
    return c;
}

template <class Enum, class Parse>
Enum parse_name(const json& raw, const std::string& path, Parse parse) {
    const json j = as_object(raw, path);
    const auto name = get<std::string>(j, "name", path + ".name");
    try {
        return parse(name);
    } catch (const InvalidInput& e) {
        throw ConfigError(path + ".name", e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    reject_unknown_keys(j, "",
                        {"name", "objective", "initial_point", "solver", "schedule", "distribution",
                         "trajectories", "iterations", "base_seed", "record_every", "precision",
                         "output_dir", "checks"});
    ExperimentConfig c;
    c.name = get_or<std::string>(j, "name", "name", c.name);

    if (!j.contains("objective")) throw ConfigError("objective", "missing required key");
    const json obj = as_object(j["objective"], "objective");
    reject_unknown_keys(obj, "objective", {"name", "dim"});
    c.objective = parse_name<ObjectiveKind>(obj, "objective", parse_objective_kind);
    c.dim = get<std::size_t>(obj, "dim", "objective.dim");
    if (c.dim == 0) throw ConfigError("objective.dim", "must be >= 1");

    if (j.contains("initial_point")) c.initial_point = parse_initial_point(j["initial_point"]);
    if (c.initial_point.kind == InitialPoint::Kind::Explicit && c.initial_point.values.size() != c.dim)
        throw ConfigError("initial_point", "explicit point has the wrong dimension");

    if (!j.contains("solver")) throw ConfigError("solver", "missing required key");
    c.solver = parse_solver(j["solver"]);
    if (j.contains("schedule") && !j["schedule"].is_null()) {
        if (c.solver.kind != SolverSpec::Kind::Stp)
            throw ConfigError("schedule", "only the stp solver takes a schedule");
        c.schedule = parse_schedule(j["schedule"]);
    } else if (c.solver.kind == SolverSpec::Kind::Stp) {
        throw ConfigError("schedule", "the stp solver requires a schedule");
    }

    if (j.contains("distribution"))
        c.distribution = parse_name<DirectionKind>(j["distribution"], "distribution", parse_direction_kind);
    if (c.solver.kind == SolverSpec::Kind::Rgf && c.distribution != DirectionKind::UnitSphere)
        throw ConfigError("distribution.name", "rgf samples on the unit sphere only");

    c.trajectories = positive(get<std::uint64_t>(j, "trajectories", "trajectories"), "trajectories");
    c.iterations = positive(get<std::uint64_t>(j, "iterations", "iterations"), "iterations");
    c.base_seed = get_or<std::uint64_t>(j, "base_seed", "base_seed", 0);
    c.record_every = positive(get_or<std::uint64_t>(j, "record_every", "record_every", 1), "record_every");
    if (j.contains("precision") && !j["precision"].is_null()) {
        try {
            c.precision = parse_precision(get<std::string>(j, "precision", "precision"));
        } catch (const InvalidInput& e) {
            throw ConfigError("precision", e.what());
        }
    }
    c.output_dir = get_or<std::string>(j, "output_dir", "output_dir", "out");
    if (j.contains("checks")) c.checks = parse_checks(j["checks"]);
    return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["name"] = c.name;
    j["objective"] = {{"name", std::string(to_string(c.objective))}, {"dim", c.dim}};
    switch (c.initial_point.kind) {
        case InitialPoint::Kind::Zeros: j["initial_point"] = "zeros"; break;
        case InitialPoint::Kind::Ones: j["initial_point"] = "ones"; break;
        case InitialPoint::Kind::Level: j["initial_point"] = {{"level", c.initial_point.level}}; break;
        case InitialPoint::Kind::Explicit: j["initial_point"] = c.initial_point.values; break;
    }
    switch (c.solver.kind) {
        case SolverSpec::Kind::Stp: j["solver"] = {{"name", "stp"}}; break;
        case SolverSpec::Kind::Rgf:
            j["solver"] = {{"name", "rgf"}, {"mu_fd", c.solver.smoothing}, {"h_step", c.solver.step}};
            break;
        case SolverSpec::Kind::Gld:
            j["solver"] = {{"name", "gld"}, {"r_min", c.solver.r_min}, {"r_max", c.solver.r_max}};
            break;
    }
    if (c.schedule) {
        const auto& s = *c.schedule;
        switch (s.kind) {
            case ScheduleSpec::Kind::Power:
                j["schedule"] = {{"name", "power"}, {"alpha", *s.alpha}, {"exponent", s.exponent}};
                break;
            case ScheduleSpec::Kind::Harmonic:
                j["schedule"] = {{"name", "harmonic"}};
                if (s.alpha) j["schedule"]["alpha"] = *s.alpha;
                else j["schedule"]["alpha"] = "auto";
                break;
            case ScheduleSpec::Kind::Directional:
                j["schedule"] = {{"name", "directional"}};
                j["schedule"]["h"] = s.h ? json(*s.h) : json(nullptr);
                break;
        }
    } else {
        j["schedule"] = nullptr;
    }
    j["distribution"] = {{"name", std::string(to_string(c.distribution))}};
    j["trajectories"] = c.trajectories;
    j["iterations"] = c.iterations;
    j["base_seed"] = c.base_seed;
    j["record_every"] = c.record_every;
    j["precision"] = c.precision ? json(std::string(to_string(*c.precision))) : json(nullptr);
    j["output_dir"] = c.output_dir.generic_string();
    const auto& k = c.checks;
    j["checks"] = {{"decrease_samples", k.decrease_samples},
                   {"rate_fit_max_slope", k.rate_fit_max_slope},
                   {"rate_fit_window", k.rate_fit_window},
                   {"tail_slack", k.tail_slack},
                   {"last_iterate_ratio", k.last_iterate_ratio},
                   {"linear_rate_slack", k.linear_rate_slack},
                   {"linear_rate_s", k.linear_rate_s},
                   {"sublevel_probes", k.sublevel_probes}};
    return j;
}

std::string canonical_text(const ExperimentConfig& config) { return to_json(config).dump(2); }

std::string config_digest(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_text(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ResolvedExperiment resolve(const ExperimentConfig& c) {
    ResolvedExperiment r;
    r.objective = describe_objective(c.objective, c.dim);
    r.constants = analytic_constants(c.distribution, c.dim);

    switch (c.initial_point.kind) {
        case InitialPoint::Kind::Zeros: r.initial_point.assign(c.dim, 0.0); break;
        case InitialPoint::Kind::Ones: r.initial_point.assign(c.dim, 1.0); break;
        case InitialPoint::Kind::Explicit: r.initial_point = c.initial_point.values; break;
        case InitialPoint::Kind::Level:
            try {
                r.initial_point = point_at_level(c.objective, c.dim, c.initial_point.level);
            } catch (const UnsupportedObjective& e) {
                throw ConfigError("initial_point.level", e.what());
            }
            break;
    }
    {
        Objective<double> probe(c.objective, c.dim);
        r.initial_gap = r.objective.f_star ? probe.evaluate(r.initial_point) - *r.objective.f_star
                                           : std::numeric_limits<double>::quiet_NaN();
    }

    switch (c.solver.kind) {
        case SolverSpec::Kind::Rgf: r.solver = RgfParams{c.solver.smoothing, c.solver.step}; break;
        case SolverSpec::Kind::Gld: r.solver = GldParams{c.distribution, c.solver.r_min, c.solver.r_max}; break;
        case SolverSpec::Kind::Stp: {
            const auto& s = *c.schedule;
            StepSchedule schedule;
            switch (s.kind) {
                case ScheduleSpec::Kind::Power: schedule = PowerSchedule{*s.alpha, s.exponent}; break;
                case ScheduleSpec::Kind::Directional: {
                    double h = 0;
                    if (s.h) {
                        h = *s.h;
                    } else {
                        if (!(r.objective.mu > 0))
                            throw ConfigError("schedule.h", "objective is not strongly convex; give h explicitly");
                        h = probe_base_for_linear_rate(r.constants.mu_D, r.objective.mu, r.objective.L);
                    }
                    r.probe_base = h;
                    schedule = DirectionalSchedule{r.objective.L, h};
                    break;
                }
                case ScheduleSpec::Kind::Harmonic: {
                    const bool convex_supported = r.objective.kind != ObjectiveKind::NesterovChain;
                    double R = 0;
                    if (convex_supported) {
                        SeededRng rng(mix64(c.base_seed ^ 0x5eed5eedULL));
                        R = estimate_sublevel_radius(r.objective, r.initial_point, c.checks.sublevel_probes, rng);
                    }
                    if (!s.alpha) {
                        if (!convex_supported)
                            throw ConfigError("schedule.alpha", "automatic alpha needs a closed-form sublevel radius");
                        try {
                            r.harmonic = harmonic_rate_constants(r.objective, r.initial_gap, R, r.constants.mu_D);
                        } catch (const DegenerateStart& e) {
                            throw ConfigError("initial_point", e.what());
                        }
                        schedule = HarmonicSchedule{r.harmonic->alpha};
                    } else {
                        schedule = HarmonicSchedule{*s.alpha};
                        if (convex_supported && R > 0 && *s.alpha * r.constants.mu_D > R)
                            r.harmonic = harmonic_rate_constants(r.objective, r.initial_gap, R,
                                                                 r.constants.mu_D, *s.alpha);
                    }
                    break;
                }
            }
            r.solver = StpParams{c.distribution, schedule};
            break;
        }
    }
    validate(r.solver);

    const bool directional = c.schedule && c.schedule->kind == ScheduleSpec::Kind::Directional;
    r.precision = c.precision.value_or(directional ? Precision::Extended : Precision::Double);
    return r;
}

}  // namespace stp::harness
