#include "stp/trajectory.hpp"

#include "stp/errors.hpp"

namespace stp {

void validate_trajectory(const Trajectory& trajectory) {
    const auto& r = trajectory.records;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const std::string where = "trajectory " + std::to_string(trajectory.run_index) +
                                  " record " + std::to_string(i) + ": ";
        if (r[i].t <= r[i - 1].t) throw InvalidInput(where + "t not strictly increasing");
        if (r[i].evals <= r[i - 1].evals) throw InvalidInput(where + "evals not strictly increasing");
        if (r[i].min_grad_norm > r[i - 1].min_grad_norm)
            throw InvalidInput(where + "min_grad_norm increased");
    }
}

bool same_except_elapsed(const Trajectory& a, const Trajectory& b) {
    if (a.run_index != b.run_index || a.seed != b.seed || a.records.size() != b.records.size() ||
        a.terminal_reason != b.terminal_reason)
        return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        auto x = a.records[i];
        auto y = b.records[i];
        x.elapsed_ns = y.elapsed_ns = 0;
        if (!(x == y)) return false;
    }
    return true;
}

}  // namespace stp
