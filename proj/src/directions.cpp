#include "stp/directions.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stp {

std::string_view to_string(DirectionKind kind) {
    switch (kind) {
        case DirectionKind::UnitSphere: return "unit_sphere";
        case DirectionKind::ScaledGaussian: return "scaled_gaussian";
    }
    return "?";
}

DirectionKind parse_direction_kind(std::string_view name) {
    if (name == "unit_sphere") return DirectionKind::UnitSphere;
    if (name == "scaled_gaussian") return DirectionKind::ScaledGaussian;
    throw InvalidInput("unknown direction distribution '" + std::string(name) + "'");
}

DistributionConstants analytic_constants(DirectionKind kind, std::size_t dim) {
    if (dim == 0) throw InvalidDimension("analytic_constants: dimension must be >= 1");
    const double d = static_cast<double>(dim);
    switch (kind) {
        case DirectionKind::ScaledGaussian:
            return {std::sqrt(2.0 / (std::numbers::pi * d)), 1.0, dim};
        case DirectionKind::UnitSphere:
            // Asymptotic constant; a valid lower bound for every d (checked by tests).
            return {1.0 / std::sqrt(2.0 * std::numbers::pi * d), 1.0, dim};
    }
    throw InvalidInput("analytic_constants: unknown kind");
}

MonteCarloEstimate monte_carlo_mu(DirectionKind kind, std::span<const double> probe,
                                  std::size_t n_samples, SeededRng& rng) {
    if (probe.empty()) throw InvalidDimension("monte_carlo_mu: dimension must be >= 1");
    if (n_samples == 0) throw InvalidInput("monte_carlo_mu: n_samples must be >= 1");
    const double pn = norm2(probe);
    if (!(pn > 0.0)) throw InvalidInput("monte_carlo_mu: probe vector must be nonzero");

    std::vector<double> s(probe.size());
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        sample_direction<double>(kind, std::span<double>(s), rng);
        const double v = std::abs(dot<double>(probe, s)) / pn;
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    double se = 0.0;
    if (n_samples > 1) {
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
    }
    return {mean, se, n_samples};
}

}  // namespace stp
