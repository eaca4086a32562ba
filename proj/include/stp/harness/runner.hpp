#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "stp/harness/config.hpp"
#include "stp/trajectory.hpp"

namespace stp::harness {

/// Runs trajectory `index` of the batch in the precision the config resolves to.
Trajectory run_one(const ExperimentConfig& config, const ResolvedExperiment& resolved,
                   std::uint64_t index);

/// All trajectories of the batch on a pool of `threads` workers (0 = hardware
/// concurrency). Results come back in index order and do not depend on the
/// thread count.
std::vector<Trajectory> run_batch(const ExperimentConfig& config, const ResolvedExperiment& resolved,
                                  unsigned threads);

struct RunOutput {
    std::filesystem::path directory;
    std::vector<Trajectory> trajectories;
    nlohmann::json report;
};

/// run_batch plus one CSV per trajectory, aggregate.csv and report.json.
RunOutput run_experiment(const ExperimentConfig& config, unsigned threads);

}  // namespace stp::harness
