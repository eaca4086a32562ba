#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stp/diagnostics.hpp"
#include "stp/directions.hpp"
#include "stp/numeric.hpp"
#include "stp/objectives.hpp"
#include "stp/solvers.hpp"

namespace stp::harness {

struct InitialPoint {
    enum class Kind { Zeros, Ones, Level, Explicit };
    Kind kind = Kind::Zeros;
    double level = 0;            // Level: f(x) - f* at the start
    std::vector<double> values;  // Explicit
};

struct ScheduleSpec {
    enum class Kind { Power, Harmonic, Directional };
    Kind kind = Kind::Power;
    std::optional<double> alpha;  // harmonic: absent means 2R / mu_D
    double exponent = 0.51;
    std::optional<double> h;      // directional: absent means the linear-rate default
};

struct SolverSpec {
    enum class Kind { Stp, Rgf, Gld };
    Kind kind = Kind::Stp;
    double smoothing = 1e-4;  // rgf
    double step = 0.25;       // rgf
    double r_min = 1e-5;      // gld
    double r_max = 1e-4;      // gld
};

/// Thresholds used by the check suite.
struct CheckSettings {
    std::size_t decrease_samples = 10000;
    double rate_fit_max_slope = -0.40;
    double rate_fit_window = 0.5;
    double tail_slack = 0.05;
    double last_iterate_ratio = 0.10;
    double linear_rate_slack = 0.003;
    double linear_rate_s = 0.9;
    std::uint64_t sublevel_probes = 10000;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ObjectiveKind objective = ObjectiveKind::NesterovChain;
    std::size_t dim = 500;
    InitialPoint initial_point;
    SolverSpec solver;
    std::optional<ScheduleSpec> schedule;
    DirectionKind distribution = DirectionKind::UnitSphere;
    std::uint64_t trajectories = 1;
    std::uint64_t iterations = 1;
    std::uint64_t base_seed = 0;
    std::uint64_t record_every = 1;
    std::optional<Precision> precision;
    std::filesystem::path output_dir = "out";
    CheckSettings checks;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical form: every field spelled out, keys sorted.
nlohmann::json to_json(const ExperimentConfig& config);
std::string canonical_text(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical text, as 16 hex digits.
std::string config_digest(const ExperimentConfig& config);

/// Fully resolved run description: derived constants filled in.
struct ResolvedExperiment {
    ObjectiveInfo objective;
    SolverKind solver;
    Precision precision;
    std::vector<double> initial_point;
    double initial_gap;  // f(x1) - f*, NaN when f* is unknown
    DistributionConstants constants;
    std::optional<HarmonicRateConstants> harmonic;  // harmonic schedule on a convex objective
    std::optional<double> probe_base;               // directional schedule
};

/// Throws ConfigError naming the offending key.
ResolvedExperiment resolve(const ExperimentConfig& config);

}  // namespace stp::harness
