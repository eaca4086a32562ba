#include "stp/solvers.hpp"

#include <cmath>

namespace stp {

std::string_view solver_name(const SolverKind& kind) {
    switch (kind.index()) {
        case 0: return "stp";
        case 1: return "rgf";
        default: return "gld";
    }
}

void validate(const SolverKind& kind) {
    if (const auto* p = std::get_if<StpParams>(&kind)) {
        validate(p->schedule);
    } else if (const auto* p = std::get_if<RgfParams>(&kind)) {
        if (!(p->smoothing > 0)) throw InvalidInput("rgf: smoothing must be > 0");
        if (!(p->step > 0)) throw InvalidInput("rgf: step must be > 0");
    } else {
        const auto& g = std::get<GldParams>(kind);
        gld_levels(g.r_min, g.r_max);
    }
}

std::string describe_schedule(const SolverKind& kind) {
    if (const auto* p = std::get_if<StpParams>(&kind)) return describe(p->schedule);
    return "";
}

std::size_t gld_levels(double r_min, double r_max) {
    if (!(r_min > 0 && r_max > r_min)) throw InvalidInput("gld: need 0 < r_min < r_max");
    // Guard against log2 of an exact power of two landing a hair above the integer.
    const double k = std::ceil(std::log2(r_max / r_min) - 1e-12);
    return static_cast<std::size_t>(std::max(1.0, k));
}

std::vector<double> gld_radii(double r_min, double r_max) {
    const std::size_t levels = gld_levels(r_min, r_max);
    std::vector<double> radii;
    radii.reserve(levels + 1);
    for (std::size_t k = 0; k <= levels; ++k) radii.push_back(std::ldexp(r_max, -static_cast<int>(k)));
    return radii;
}

std::uint64_t evals_per_step(const SolverKind& kind) {
    if (const auto* p = std::get_if<StpParams>(&kind)) return is_directional(p->schedule) ? 3 : 2;
    if (std::holds_alternative<RgfParams>(kind)) return 2;
    const auto& g = std::get<GldParams>(kind);
    return gld_levels(g.r_min, g.r_max) + 1;
}

}  // namespace stp
