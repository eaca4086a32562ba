#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stp/trajectory.hpp"

namespace stp::harness {

/// Column order of every trajectory file.
inline constexpr const char* kTrajectoryHeader =
    "run_index,seed,t,f_value,grad_norm,min_grad_norm,alpha_t,evals,elapsed_ns";

/// Shortest round-trip form with 17 significant digits.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

/// Parses records, run_index and seed; descriptor strings are left empty.
Trajectory read_trajectory_csv(std::istream& in, const std::string& source = "<stream>");
Trajectory read_trajectory_csv(const std::filesystem::path& path);

std::string trajectory_file_name(std::uint64_t run_index);

}  // namespace stp::harness
