#include "stp/harness/report.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stp/errors.hpp"
#include "stp/harness/csv.hpp"
#include "stp/rng.hpp"

namespace stp::harness {

using nlohmann::json;

std::filesystem::path effective_output_dir(const ExperimentConfig& config) {
    if (const char* env = std::getenv("STP_OUTPUT_DIR"); env && *env) return env;
    return config.output_dir;
}

json build_report(const ExperimentConfig& config, std::span<const Trajectory> trajectories) {
    json report;
    report["config"] = to_json(config);
    report["config_digest"] = config_digest(config);
    json list = json::array();
    for (const auto& tr : trajectories) {
        const auto& last = tr.records.back();
        list.push_back({{"run_index", tr.run_index},
                        {"seed", tr.seed},
                        {"file", trajectory_file_name(tr.run_index)},
                        {"final_t", last.t},
                        {"final_f", last.f_value},
                        {"final_grad_norm", last.grad_norm},
                        {"min_grad_norm", last.min_grad_norm},
                        {"evals", last.evals},
                        {"elapsed_ns", last.elapsed_ns},
                        {"terminal_reason", tr.terminal_reason ? json(*tr.terminal_reason) : json(nullptr)}});
    }
    report["trajectories"] = std::move(list);
    return report;
}

void write_aggregate_csv(const std::filesystem::path& path, std::span<const Trajectory> trajectories) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << "run_index,seed,final_t,final_f,final_grad_norm,min_grad_norm,evals,elapsed_ns,terminal_reason\n";
    for (const auto& tr : trajectories) {
        const auto& r = tr.records.back();
        out << tr.run_index << ',' << tr.seed << ',' << r.t << ',' << format_double(r.f_value) << ','
            << format_double(r.grad_norm) << ',' << format_double(r.min_grad_norm) << ',' << r.evals
            << ',' << r.elapsed_ns << ',' << tr.terminal_reason.value_or("") << '\n';
    }
}

LoadedRun load_run(const ExperimentConfig& config, const std::filesystem::path& directory) {
    LoadedRun run{config, directory, {}};
    for (std::uint64_t i = 0; i < config.trajectories; ++i) {
        const auto path = directory / trajectory_file_name(i);
        if (!std::filesystem::exists(path))
            throw FileError("trajectory file not found: expected " + path.string());
        auto tr = read_trajectory_csv(path);
        if (tr.run_index != i || tr.seed != trajectory_seed(config.base_seed, i))
            throw InvalidInput(path.string() + ": run_index/seed do not match the config");
        tr.objective = std::string(to_string(config.objective));
        run.trajectories.push_back(std::move(tr));
    }
    return run;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("file not found: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FileError(path.string() + ": invalid JSON: " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

namespace {

LoadedRun load_single(const json& report, const std::filesystem::path& directory) {
    auto config = parse_config(report.at("config"));
    auto run = load_run(config, directory);
    for (const auto& s : report.at("trajectories")) {
        const auto idx = s.at("run_index").get<std::uint64_t>();
        if (idx < run.trajectories.size() && !s.at("terminal_reason").is_null())
            run.trajectories[idx].terminal_reason = s.at("terminal_reason").get<std::string>();
    }
    return run;
}

}  // namespace

std::vector<LoadedRun> load_report(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    std::vector<LoadedRun> runs;
    if (j.contains("runs")) {
        for (const auto& entry : j.at("runs")) {
            const std::filesystem::path dir = entry.at("directory").get<std::string>();
            runs.push_back(load_single(entry.at("report"), dir));
        }
    } else {
        runs.push_back(load_single(j, path.parent_path().empty() ? "." : path.parent_path()));
    }
    return runs;
}

json merge_reports(std::span<const std::filesystem::path> reports) {
    json merged;
    merged["runs"] = json::array();
    for (const auto& p : reports) {
        const json j = read_json_file(p);
        if (j.contains("runs")) {
            for (const auto& entry : j.at("runs")) merged["runs"].push_back(entry);
        } else {
            const auto dir = std::filesystem::absolute(p).parent_path();
            merged["runs"].push_back({{"directory", dir.generic_string()}, {"report", j}});
        }
    }
    return merged;
}

}  // namespace stp::harness
