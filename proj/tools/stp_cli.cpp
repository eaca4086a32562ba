// Command-line front end: run, check, plot, aggregate, constants.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stp/diagnostics.hpp"
#include "stp/errors.hpp"
#include "stp/harness/checks.hpp"
#include "stp/harness/config.hpp"
#include "stp/harness/plot.hpp"
#include "stp/harness/report.hpp"
#include "stp/harness/runner.hpp"
#include "stp/rng.hpp"
#include "stp/schedules.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stp;
using namespace stp::harness;

namespace {

constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;

int cmd_run(const fs::path& config_path, unsigned threads) {
    const auto config = load_config(config_path);
    const auto out = run_experiment(config, threads);
    std::cout << (out.directory / "report.json").string() << '\n';
    return 0;
}

int cmd_check(const fs::path& config_path, const fs::path& report_path, const fs::path& out_path) {
    std::vector<LoadedRun> runs;
    if (!config_path.empty()) {
        const auto config = load_config(config_path);
        runs.push_back(load_run(config, effective_output_dir(config)));
    } else {
        runs = load_report(report_path);
    }
    std::vector<CheckSuite> suites;
    for (const auto& run : runs) suites.push_back(run_checks(run));
    const auto j = suites_to_json(suites);
    if (!out_path.empty()) write_json_file(out_path, j);
    std::cout << j.dump(2) << '\n';
    return j["pass"].get<bool>() ? 0 : kCheckFailed;
}

int cmd_plot(const fs::path& report_path, const std::string& kind, const fs::path& out_path) {
    const auto runs = load_report(report_path);
    const auto spec = build_plot(runs, parse_plot_kind(kind));
    write_svg(out_path, render_svg(spec));
    std::cout << out_path.string() << '\n';
    return 0;
}

int cmd_aggregate(const std::vector<fs::path>& reports, const fs::path& out_path) {
    const auto merged = merge_reports(reports);
    write_json_file(out_path, merged);
    std::cout << out_path.string() << '\n';
    return 0;
}

int cmd_constants(const fs::path& config_path) {
    const auto config = load_config(config_path);
    const auto r = resolve(config);
    const auto& info = r.objective;
    json j = {{"objective", info.name()},
              {"dim", info.dim},
              {"L", info.L},
              {"mu", info.mu},
              {"distribution", std::string(to_string(config.distribution))},
              {"mu_D", r.constants.mu_D},
              {"gamma_D", r.constants.gamma_D},
              {"initial_gap", std::isfinite(r.initial_gap) ? json(r.initial_gap) : json(nullptr)}};
    if (info.mu > 0) {
        const double h = probe_base_for_linear_rate(r.constants.mu_D, info.mu, info.L);
        j["linear_rate"] = {{"h", r.probe_base.value_or(h)},
                            {"default_h", h},
                            {"contraction", 1.0 - r.constants.mu_D * r.constants.mu_D * info.mu / info.L}};
    }
    std::optional<HarmonicRateConstants> hc = r.harmonic;
    if (!hc && info.kind != ObjectiveKind::NesterovChain && r.initial_gap > 0) {
        SeededRng rng(mix64(config.base_seed ^ 0x5eed5eedULL));
        const double R = estimate_sublevel_radius(info, r.initial_point, config.checks.sublevel_probes, rng);
        hc = harmonic_rate_constants(info, r.initial_gap, R, r.constants.mu_D);
    }
    if (hc) j["harmonic_rate"] = {{"R", hc->R}, {"alpha", hc->alpha}, {"a", hc->a}};
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic three points: experiments, diagnostics and plots", "stp_cli"};
    app.require_subcommand(1);

    fs::path run_config;
    unsigned threads = 0;
    auto* run = app.add_subcommand("run", "Run a batch of trajectories and write CSVs and a report");
    run->add_option("--config", run_config, "Experiment config (JSON)")->required();
    run->add_option("--threads", threads, "Worker threads (0 = all cores)");

    fs::path check_config, check_report, check_out;
    auto* check = app.add_subcommand("check", "Run the diagnostic suite; exit status 0 iff every check passes");
    auto* cc = check->add_option("--config", check_config, "Experiment config whose output to check");
    auto* cr = check->add_option("--report", check_report, "report.json (single or merged)");
    check->add_option("--out", check_out, "Also write the JSON result here");
    cc->excludes(cr);
    cr->excludes(cc);

    fs::path plot_report, plot_out;
    std::string plot_kind;
    auto* plot = app.add_subcommand("plot", "Render an SVG plot from a report");
    plot->add_option("--report", plot_report, "report.json (single or merged)")->required();
    plot->add_option("--kind", plot_kind, "grad_vs_iter | grad_vs_time | rate_curve | fgap_vs_iter")->required();
    plot->add_option("--out", plot_out, "Output SVG path")->required();

    std::vector<fs::path> agg_reports;
    fs::path agg_out;
    auto* aggregate = app.add_subcommand("aggregate", "Merge several reports into one");
    aggregate->add_option("--report", agg_reports, "Input report (repeatable)")->required();
    aggregate->add_option("--out", agg_out, "Merged report path")->required();

    fs::path const_config;
    auto* constants = app.add_subcommand("constants", "Print the analytic constants for a config");
    constants->add_option("--config", const_config, "Experiment config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        if (code != 0) std::cerr << app.help();
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*run) return cmd_run(run_config, threads);
        if (*check) {
            if (check_config.empty() && check_report.empty()) {
                std::cerr << "check: one of --config or --report is required\n" << check->help();
                return kUsageError;
            }
            return cmd_check(check_config, check_report, check_out);
        }
        if (*plot) return cmd_plot(plot_report, plot_kind, plot_out);
        if (*aggregate) return cmd_aggregate(agg_reports, agg_out);
        if (*constants) return cmd_constants(const_config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const FileError& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsageError;
}
