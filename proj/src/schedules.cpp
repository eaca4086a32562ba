#include "stp/schedules.hpp"

#include <charconv>
#include <string>

namespace stp {

void validate(const StepSchedule& schedule) {
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, PowerSchedule>) {
                if (!(s.alpha > 0)) throw InvalidInput("power schedule: alpha must be > 0");
                if (!(s.exponent > 0 && s.exponent <= 1))
                    throw InvalidInput("power schedule: exponent must lie in (0, 1]");
            } else if constexpr (std::is_same_v<S, HarmonicSchedule>) {
                if (!(s.alpha > 0)) throw InvalidInput("harmonic schedule: alpha must be > 0");
            } else {
                if (!(s.L > 0)) throw InvalidInput("directional schedule: L must be > 0");
                if (!(s.h > 1)) throw InvalidInput("directional schedule: h must be > 1");
                if (!(s.offset_floor > 0))
                    throw InvalidInput("directional schedule: offset floor must be > 0");
            }
        },
        schedule);
}

bool is_directional(const StepSchedule& schedule) {
    return std::holds_alternative<DirectionalSchedule>(schedule);
}

namespace {

// Shortest text that reads back to the same double.
std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string describe(const StepSchedule& schedule) {
    return std::visit(
        [](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, PowerSchedule>)
                return "power(alpha=" + shortest(s.alpha) + ",exponent=" + shortest(s.exponent) + ")";
            else if constexpr (std::is_same_v<S, HarmonicSchedule>)
                return "harmonic(alpha=" + shortest(s.alpha) + ")";
            else
                return "directional(L=" + shortest(s.L) + ",h=" + shortest(s.h) + ")";
        },
        schedule);
}

std::optional<double> probe_offset(const DirectionalSchedule& schedule, std::uint64_t t) {
    if (t == 0) throw InvalidInput("probe_offset: iteration index starts at 1");
    const double offset = std::pow(schedule.h, -static_cast<double>(t));
    if (!(offset >= schedule.offset_floor)) return std::nullopt;
    return offset;
}

bool satisfies_robbins_monro(const StepSchedule& schedule) {
    if (const auto* p = std::get_if<PowerSchedule>(&schedule))
        return p->exponent > 0.5 && p->exponent <= 1.0;
    return std::holds_alternative<HarmonicSchedule>(schedule);
}

double probe_base_for_linear_rate(double mu_D, double mu, double L) {
    if (!(mu > 0 && L > 0 && mu <= L))
        throw InvalidInput("probe_base_for_linear_rate: need 0 < mu <= L");
    if (!(mu_D > 0 && mu_D < 1))
        throw InvalidInput("probe_base_for_linear_rate: need 0 < mu_D < 1");
    const double q = mu_D * mu_D * mu / L;
    if (!(q < 1)) throw InvalidInput("probe_base_for_linear_rate: mu_D^2 mu must be < L");
    return 2.0 / std::sqrt(1.0 - q);
}

}  // namespace stp
