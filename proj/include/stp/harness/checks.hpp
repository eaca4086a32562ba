#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stp/harness/report.hpp"

namespace stp::harness {

struct CheckResult {
    std::string name;
    bool pass = false;
    nlohmann::json statistics = nlohmann::json::object();
};

struct CheckSuite {
    std::string run_name;
    std::string config_digest;
    std::vector<CheckResult> results;
    std::vector<std::string> skipped;  // "name: reason" for checks that did not apply

    bool all_pass() const;
    nlohmann::json to_json() const;
};

/// Every diagnostic that applies to the run's solver, schedule and objective.
CheckSuite run_checks(const LoadedRun& run);

/// {"pass": bool, "runs": [suite...]}.
nlohmann::json suites_to_json(std::span<const CheckSuite> suites);

// Individual checks, exposed for tests.
CheckResult check_record_invariants(std::span<const Trajectory> trajectories);
CheckResult check_monotone_descent(std::span<const Trajectory> trajectories);
CheckResult check_eval_accounting(std::span<const Trajectory> trajectories, std::uint64_t per_step);
CheckResult check_progress(std::span<const Trajectory> trajectories);

}  // namespace stp::harness
