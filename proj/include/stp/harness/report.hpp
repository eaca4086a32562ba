#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "stp/harness/config.hpp"
#include "stp/trajectory.hpp"

namespace stp::harness {

/// Output directory of a config; the STP_OUTPUT_DIR environment variable wins.
std::filesystem::path effective_output_dir(const ExperimentConfig& config);

/// Per-trajectory summaries plus the canonical config and its digest.
nlohmann::json build_report(const ExperimentConfig& config, std::span<const Trajectory> trajectories);

void write_aggregate_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories);

struct LoadedRun {
    ExperimentConfig config;
    std::filesystem::path directory;
    std::vector<Trajectory> trajectories;
};

/// Reads trajectory_NNNNN.csv for every index of the config from `directory`.
LoadedRun load_run(const ExperimentConfig& config, const std::filesystem::path& directory);

/// Accepts a single-run report or a merged one; trajectory files are found
/// next to each run's report.
std::vector<LoadedRun> load_report(const std::filesystem::path& path);

/// {"runs": [...]} referencing each input report's directory.
nlohmann::json merge_reports(std::span<const std::filesystem::path> reports);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace stp::harness
