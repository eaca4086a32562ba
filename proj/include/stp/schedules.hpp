#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "stp/errors.hpp"

namespace stp {

/// alpha / t^exponent, exponent in (0, 1].
struct PowerSchedule {
    double alpha;
    double exponent;
};

/// alpha / t
struct HarmonicSchedule {
    double alpha;
};

/// |f(x + h^-t s) - f(x)| / (L h^-t): a finite-difference estimate of the
/// directional derivative with a geometrically shrinking offset.
struct DirectionalSchedule {
    double L;
    double h;
    double offset_floor = 1e-300;
};

using StepSchedule = std::variant<PowerSchedule, HarmonicSchedule, DirectionalSchedule>;

void validate(const StepSchedule& schedule);
bool is_directional(const StepSchedule& schedule);
std::string describe(const StepSchedule& schedule);

/// Function values that feed the directional schedule at one iteration.
template <class Real>
struct DirectionalProbe {
    double offset;  // h^-t
    Real f_probe;   // f(x + offset * s)
    Real f_current; // f(x)
};

/// h^-t, or nullopt once it drops below the schedule's floor.
std::optional<double> probe_offset(const DirectionalSchedule& schedule, std::uint64_t t);

/// True iff sum alpha_t^2 < inf and sum alpha_t = inf hold for every run.
bool satisfies_robbins_monro(const StepSchedule& schedule);

/// Base of the probe offset h^-t giving the linear rate (1 - mu_D^2 mu / L)
/// on mu-strongly convex, L-smooth objectives: 2 / sqrt(1 - mu_D^2 mu / L).
double probe_base_for_linear_rate(double mu_D, double mu, double L);

/// Step size at iteration t >= 1. The probe must be supplied iff the schedule
/// is directional; a directional offset below the floor throws ScheduleExhausted.
template <class Real>
Real step_size(const StepSchedule& schedule, std::uint64_t t,
               const DirectionalProbe<Real>* probe = nullptr) {
    if (t == 0) throw InvalidInput("step_size: iteration index starts at 1");
    const double td = static_cast<double>(t);
    if (const auto* p = std::get_if<PowerSchedule>(&schedule)) {
        if (probe) throw InvalidInput("step_size: power schedule takes no probe");
        return Real(p->alpha / std::pow(td, p->exponent));
    }
    if (const auto* p = std::get_if<HarmonicSchedule>(&schedule)) {
        if (probe) throw InvalidInput("step_size: harmonic schedule takes no probe");
        return Real(p->alpha / td);
    }
    const auto& dir = std::get<DirectionalSchedule>(schedule);
    if (!probe) throw InvalidInput("step_size: directional schedule requires a probe");
    if (!(probe->offset >= dir.offset_floor))
        throw ScheduleExhausted("probe offset h^-t fell below " + std::to_string(dir.offset_floor));
    const double expected = std::pow(dir.h, -td);
    if (std::abs(probe->offset - expected) > 1e-12 * expected)
        throw InvalidInput("step_size: probe offset does not match h^-t");
    using std::abs;
    using std::isfinite;
    Real diff = abs(probe->f_probe - probe->f_current);
    if (!isfinite(diff)) throw InvalidInput("step_size: non-finite probe values");
    return diff / (Real(dir.L) * Real(probe->offset));
}

}  // namespace stp
