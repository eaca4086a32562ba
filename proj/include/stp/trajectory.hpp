#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stp {

/// State of iterate t. `alpha` is the step size used from this iterate;
/// `evals` counts oracle calls spent before iteration t started.
struct TrajectoryRecord {
    std::uint64_t t = 0;
    double f_value = 0;
    double grad_norm = 0;
    double min_grad_norm = 0;
    std::optional<double> alpha;
    std::uint64_t evals = 0;
    std::int64_t elapsed_ns = 0;

    bool operator==(const TrajectoryRecord&) const = default;
};

struct Trajectory {
    std::uint64_t run_index = 0;
    std::uint64_t seed = 0;
    std::string solver;
    std::string objective;
    std::string schedule;
    std::vector<TrajectoryRecord> records;
    std::optional<std::string> terminal_reason;
};

/// Throws InvalidInput unless t and evals strictly increase and
/// min_grad_norm never increases.
void validate_trajectory(const Trajectory& trajectory);

/// Records equal in every field except the wall clock.
bool same_except_elapsed(const Trajectory& a, const Trajectory& b);

}  // namespace stp
