#include "stp/harness/runner.hpp"

#include <atomic>
#include <exception>
#include <thread>

#include "stp/errors.hpp"
#include "stp/harness/csv.hpp"
#include "stp/harness/report.hpp"
#include "stp/rng.hpp"
#include "stp/solvers.hpp"

namespace stp::harness {

namespace {

template <class Real>
Trajectory run_in(const ExperimentConfig& config, const ResolvedExperiment& resolved,
                  std::uint64_t index) {
    Objective<Real> objective(config.objective, config.dim);
    const auto theta = convert_vector<Real>(resolved.initial_point);
    auto tr = run_trajectory<Real>(resolved.solver, objective, theta, config.iterations,
                                   trajectory_seed(config.base_seed, index), config.record_every);
    tr.run_index = index;
    return tr;
}

}  // namespace

Trajectory run_one(const ExperimentConfig& config, const ResolvedExperiment& resolved,
                   std::uint64_t index) {
    if (resolved.precision == Precision::Extended) return run_in<ExtendedReal>(config, resolved, index);
    return run_in<double>(config, resolved, index);
}

std::vector<Trajectory> run_batch(const ExperimentConfig& config, const ResolvedExperiment& resolved,
                                  unsigned threads) {
    const std::size_t n = config.trajectories;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::vector<Trajectory> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i] = run_one(config, resolved, i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

RunOutput run_experiment(const ExperimentConfig& config, unsigned threads) {
    const auto resolved = resolve(config);
    RunOutput out;
    out.directory = effective_output_dir(config);
    std::error_code ec;
    std::filesystem::create_directories(out.directory, ec);
    if (ec) throw FileError("cannot create output directory " + out.directory.string() + ": " + ec.message());

    out.trajectories = run_batch(config, resolved, threads);
    for (const auto& tr : out.trajectories)
        write_trajectory_csv(out.directory / trajectory_file_name(tr.run_index), tr);
    write_aggregate_csv(out.directory / "aggregate.csv", out.trajectories);
    out.report = build_report(config, out.trajectories);
    write_json_file(out.directory / "report.json", out.report);
    return out;
}

}  // namespace stp::harness
