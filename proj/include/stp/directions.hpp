#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "stp/errors.hpp"
#include "stp/numeric.hpp"
#include "stp/rng.hpp"

namespace stp {

/// Law of the random search direction.
///  - UnitSphere: uniform on the unit sphere, ||s|| = 1 exactly.
///  - ScaledGaussian: N(0, I/d). Its norm exceeds 1 with small probability,
///    so the bounded-norm requirement of the analysis holds only approximately.
enum class DirectionKind { UnitSphere, ScaledGaussian };

std::string_view to_string(DirectionKind kind);
DirectionKind parse_direction_kind(std::string_view name);

struct DistributionConstants {
    double mu_D;     // E|<v,s>| >= mu_D ||v||_2
    double gamma_D;  // E||s||_2^2
    std::size_t dim;
};

DistributionConstants analytic_constants(DirectionKind kind, std::size_t dim);

/// Fill `out` with one draw. The draw is made in double and, for the sphere,
/// normalized in `Real` so that ||s|| = 1 holds to the precision of `Real`.
template <class Real>
void sample_direction(DirectionKind kind, std::span<Real> out, SeededRng& rng) {
    if (out.empty()) throw InvalidDimension("sample_direction: dimension must be >= 1");
    const std::size_t d = out.size();
    if (kind == DirectionKind::ScaledGaussian) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(d));
        for (auto& x : out) x = Real(rng.normal() * scale);
        return;
    }
    // Zero has probability zero; resample if it ever shows up.
    for (;;) {
        double sq = 0.0;
        for (auto& x : out) {
            const double g = rng.normal();
            x = Real(g);
            sq += g * g;
        }
        if (sq > 0.0) break;
    }
    // Divide rather than scale by 1/n so d = 1 lands exactly on +-1.
    const Real n = norm2<Real>(out);
    for (auto& x : out) x /= n;
}

template <class Real = double>
Vec<Real> sample_direction(DirectionKind kind, std::size_t dim, SeededRng& rng) {
    if (dim == 0) throw InvalidDimension("sample_direction: dimension must be >= 1");
    Vec<Real> s(dim);
    sample_direction<Real>(kind, std::span<Real>(s), rng);
    return s;
}

struct MonteCarloEstimate {
    double mean;
    double std_error;
    std::size_t samples;
};

/// Sample mean of |<probe, s>| / ||probe||_2 over n draws.
MonteCarloEstimate monte_carlo_mu(DirectionKind kind, std::span<const double> probe,
                                  std::size_t n_samples, SeededRng& rng);

}  // namespace stp
