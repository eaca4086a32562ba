#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stp/harness/report.hpp"

namespace stp::harness {

enum class PlotKind { GradVsIter, GradVsTime, RateCurve, FGapVsIter };

std::string_view to_string(PlotKind kind);
PlotKind parse_plot_kind(std::string_view name);

struct PlotSeries {
    std::string group;  // legend entry; one per run
    std::string color;
    std::vector<std::pair<double, double>> points;  // already transformed to plot space
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// One series per trajectory. Gradient and gap plots carry log10 values on y;
/// points with nonpositive values are dropped there.
PlotSpec build_plot(std::span<const LoadedRun> runs, PlotKind kind);

/// Standalone SVG text. Throws InsufficientData when no series has a point.
std::string render_svg(const PlotSpec& spec);

void write_svg(const std::filesystem::path& path, const std::string& svg);

}  // namespace stp::harness
