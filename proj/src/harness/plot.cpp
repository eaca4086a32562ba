#include "stp/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "stp/errors.hpp"
#include "stp/harness/config.hpp"

namespace stp::harness {

std::string_view to_string(PlotKind kind) {
    switch (kind) {
        case PlotKind::GradVsIter: return "grad_vs_iter";
        case PlotKind::GradVsTime: return "grad_vs_time";
        case PlotKind::RateCurve: return "rate_curve";
        case PlotKind::FGapVsIter: return "fgap_vs_iter";
    }
    return "?";
}

PlotKind parse_plot_kind(std::string_view name) {
    for (auto k : {PlotKind::GradVsIter, PlotKind::GradVsTime, PlotKind::RateCurve, PlotKind::FGapVsIter})
        if (to_string(k) == name) return k;
    throw InvalidInput("unknown plot kind '" + std::string(name) +
                       "' (expected grad_vs_iter, grad_vs_time, rate_curve or fgap_vs_iter)");
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// Exponent of the best-iterate curve: 1 - p for a power schedule, else 0.49.
double rate_exponent(const ExperimentConfig& c) {
    if (c.solver.kind == SolverSpec::Kind::Stp && c.schedule && c.schedule->kind == ScheduleSpec::Kind::Power)
        return 1.0 - c.schedule->exponent;
    return 0.49;
}

std::string group_label(const ExperimentConfig& c) {
    std::string solver = c.solver.kind == SolverSpec::Kind::Stp   ? "STP"
                         : c.solver.kind == SolverSpec::Kind::Rgf ? "RGF"
                                                                  : "GLD";
    return solver + " (" + c.name + ")";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

PlotSpec build_plot(std::span<const LoadedRun> runs, PlotKind kind) {
    PlotSpec spec;
    switch (kind) {
        case PlotKind::GradVsIter:
            spec = {"Gradient norm vs iterations", "iteration t", "log10 ||grad f||", {}};
            break;
        case PlotKind::GradVsTime:
            spec = {"Gradient norm vs time", "elapsed time (s)", "log10 ||grad f||", {}};
            break;
        case PlotKind::RateCurve:
            spec = {"Best-iterate rate", "iteration T", "T^e * min_{t<=T} ||grad f||", {}};
            break;
        case PlotKind::FGapVsIter:
            spec = {"Function gap vs iterations", "iteration t", "log10 (f - f*)", {}};
            break;
    }
    for (std::size_t g = 0; g < runs.size(); ++g) {
        const auto& run = runs[g];
        const std::string color = kPalette[g % std::size(kPalette)];
        const std::string group = group_label(run.config);
        const double e = rate_exponent(run.config);
        double f_star = std::numeric_limits<double>::quiet_NaN();
        if (kind == PlotKind::FGapVsIter) {
            const auto info = describe_objective(run.config.objective, run.config.dim);
            if (!info.f_star)
                throw UnsupportedObjective("fgap_vs_iter: objective has no known optimal value");
            f_star = *info.f_star;
        }
        if (kind == PlotKind::RateCurve) spec.y_label = "T^" + fmt(e) + " * min_{t<=T} ||grad f||";
        for (const auto& tr : run.trajectories) {
            PlotSeries s{group, color, {}};
            for (const auto& r : tr.records) {
                const double t = static_cast<double>(r.t);
                switch (kind) {
                    case PlotKind::GradVsIter:
                        if (r.grad_norm > 0) s.points.emplace_back(t, std::log10(r.grad_norm));
                        break;
                    case PlotKind::GradVsTime:
                        if (r.grad_norm > 0)
                            s.points.emplace_back(static_cast<double>(r.elapsed_ns) * 1e-9, std::log10(r.grad_norm));
                        break;
                    case PlotKind::RateCurve:
                        s.points.emplace_back(t, std::pow(t, e) * r.min_grad_norm);
                        break;
                    case PlotKind::FGapVsIter:
                        if (r.f_value - f_star > 0) s.points.emplace_back(t, std::log10(r.f_value - f_star));
                        break;
                }
            }
            spec.series.push_back(std::move(s));
        }
    }
    return spec;
}

std::string render_svg(const PlotSpec& spec) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    std::size_t n_points = 0;
    for (const auto& s : spec.series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
            ++n_points;
        }
    if (n_points == 0) throw InsufficientData("empty plot: no data points to draw");

    // 5% padding on y; a flat series gets 5% of its magnitude (or of 1).
    const double y_span = y_hi - y_lo;
    const double pad = y_span > 0 ? 0.05 * y_span : 0.05 * std::max(std::abs(y_lo), 1.0);
    y_lo -= pad;
    y_hi += pad;
    if (!(x_hi > x_lo)) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }

    constexpr double W = 800, H = 500, left = 80, right = 200, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";

    for (int i = 0; i <= 4; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
        o << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << fmt(xv)
          << "</text>\n";
        o << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv)
          << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">"
      << escape(spec.x_label) << "</text>\n";
    o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    for (const auto& s : spec.series) {
        if (s.points.empty()) continue;
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" stroke-opacity=\"0.7\" points=\"";
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!first) o << ' ';
            first = false;
            o << fmt(px(x)) << ',' << fmt(py(y));
        }
        o << "\"/>\n";
    }

    std::vector<std::pair<std::string, std::string>> legend;
    for (const auto& s : spec.series)
        if (std::find(legend.begin(), legend.end(), std::pair{s.group, s.color}) == legend.end())
            legend.emplace_back(s.group, s.color);
    for (std::size_t i = 0; i < legend.size(); ++i) {
        const double y = top + 12 + 18.0 * static_cast<double>(i);
        o << "<line x1=\"" << W - right + 12 << "\" y1=\"" << y << "\" x2=\"" << W - right + 32 << "\" y2=\"" << y
          << "\" stroke=\"" << legend[i].second << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - right + 38 << "\" y=\"" << y + 4 << "\">" << escape(legend[i].first) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const std::filesystem::path& path, const std::string& svg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write plot: " + path.string());
    out << svg;
    if (!out) throw FileError("write failed: " + path.string());
}

}  // namespace stp::harness
