#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stp/directions.hpp"
#include "stp/errors.hpp"
#include "stp/numeric.hpp"
#include "stp/objectives.hpp"
#include "stp/rng.hpp"
#include "stp/schedules.hpp"
#include "stp/trajectory.hpp"

namespace stp {

/// Stochastic three points: move to the best of x, x + a s, x - a s.
struct StpParams {
    DirectionKind directions = DirectionKind::UnitSphere;
    StepSchedule schedule = PowerSchedule{4.0, 0.51};
};

/// Random gradient-free method: x <- x - step * (f(x + smoothing u) - f(x)) / smoothing * u
/// with u uniform on the unit sphere.
struct RgfParams {
    double smoothing = 1e-4;
    double step = 0.25;
};

/// Gradientless descent: best of x and x + r_k v_k over radii r_k = 2^-k r_max,
/// k = 0..K, K = ceil(log2(r_max / r_min)).
struct GldParams {
    DirectionKind directions = DirectionKind::UnitSphere;
    double r_min = 1e-5;
    double r_max = 1e-4;
};

using SolverKind = std::variant<StpParams, RgfParams, GldParams>;

std::string_view solver_name(const SolverKind& kind);
void validate(const SolverKind& kind);
std::string describe_schedule(const SolverKind& kind);

std::size_t gld_levels(double r_min, double r_max);
std::vector<double> gld_radii(double r_min, double r_max);

/// Oracle calls per iteration, not counting the single call at start-up.
std::uint64_t evals_per_step(const SolverKind& kind);

template <class Real>
struct SolverState {
    Vec<Real> theta;
    Real f_current;  // always f(theta)
    std::uint64_t t = 1;
    SeededRng rng;
    Vec<Real> direction;  // direction drawn by the last step
    std::optional<Real> last_alpha;
    bool terminal = false;
    std::string terminal_reason;

    Vec<Real> scratch;
    Vec<Real> best;
};

template <class Real>
SolverState<Real> initial_state(Oracle<Real>& oracle, Vec<Real> theta, std::uint64_t seed) {
    if (theta.size() != oracle.dim()) throw InvalidInput("initial point has wrong dimension");
    SolverState<Real> s;
    s.f_current = oracle(theta);
    s.theta = std::move(theta);
    s.rng = SeededRng(seed);
    s.direction.assign(oracle.dim(), Real(0));
    s.scratch.assign(oracle.dim(), Real(0));
    s.best.assign(oracle.dim(), Real(0));
    return s;
}

/// Three-point update along a given direction and step. Ties keep the current
/// point; between the two moves, +alpha wins.
template <class Real>
void three_point_update(SolverState<Real>& state, std::span<const Real> direction,
                        const Real& alpha, Oracle<Real>& oracle) {
    std::span<const Real> x(state.theta);
    axpy_into<Real>(x, alpha, direction, state.scratch);
    const Real f_plus = oracle(state.scratch);
    axpy_into<Real>(x, -alpha, direction, state.best);
    const Real f_minus = oracle(state.best);

    if (f_plus < state.f_current && !(f_minus < f_plus)) {
        state.theta.swap(state.scratch);
        state.f_current = f_plus;
    } else if (f_minus < state.f_current) {
        state.theta.swap(state.best);
        state.f_current = f_minus;
    }
    state.last_alpha = alpha;
    ++state.t;
}

template <class Real>
void stp_step(SolverState<Real>& state, const StpParams& params, Oracle<Real>& oracle) {
    if (state.terminal) return;
    const auto* directional = std::get_if<DirectionalSchedule>(&params.schedule);
    std::optional<double> offset;
    if (directional) {
        offset = probe_offset(*directional, state.t);
        if (!offset) {
            state.terminal = true;
            state.terminal_reason = "schedule_exhausted";
            return;
        }
    }
    sample_direction<Real>(params.directions, std::span<Real>(state.direction), state.rng);

    Real alpha;
    if (directional) {
        axpy_into<Real>(state.theta, Real(*offset), state.direction, state.scratch);
        const DirectionalProbe<Real> probe{*offset, oracle(state.scratch), state.f_current};
        alpha = step_size<Real>(params.schedule, state.t, &probe);
    } else {
        alpha = step_size<Real>(params.schedule, state.t);
    }
    three_point_update<Real>(state, state.direction, alpha, oracle);
}

/// One RGF move along a given unit direction. Spends one call on the
/// finite difference and one to refresh f(theta).
template <class Real>
void rgf_update(SolverState<Real>& state, std::span<const Real> u, const RgfParams& params,
                Oracle<Real>& oracle) {
    const Real mu(params.smoothing);
    axpy_into<Real>(state.theta, mu, u, state.scratch);
    const Real slope = (oracle(state.scratch) - state.f_current) / mu;
    const Real move = -Real(params.step) * slope;
    for (std::size_t i = 0; i < state.theta.size(); ++i) state.theta[i] += move * u[i];
    state.f_current = oracle(state.theta);
    state.last_alpha.reset();
    ++state.t;
}

template <class Real>
void rgf_step(SolverState<Real>& state, const RgfParams& params, Oracle<Real>& oracle) {
    if (state.terminal) return;
    sample_direction<Real>(DirectionKind::UnitSphere, std::span<Real>(state.direction), state.rng);
    rgf_update<Real>(state, state.direction, params, oracle);
}

template <class Real>
void gld_step(SolverState<Real>& state, const GldParams& params, Oracle<Real>& oracle) {
    if (state.terminal) return;
    Real best_f = state.f_current;
    bool moved = false;
    for (double radius : gld_radii(params.r_min, params.r_max)) {
        sample_direction<Real>(params.directions, std::span<Real>(state.direction), state.rng);
        // Project onto the sphere of the given radius whatever the sampling law.
        const Real scale = Real(radius) / norm2<Real>(state.direction);
        axpy_into<Real>(state.theta, scale, state.direction, state.scratch);
        const Real f = oracle(state.scratch);
        if (f < best_f) {
            best_f = f;
            state.best.swap(state.scratch);
            moved = true;
        }
    }
    if (moved) {
        state.theta.swap(state.best);
        state.f_current = best_f;
    }
    state.last_alpha.reset();
    ++state.t;
}

template <class Real>
void step(SolverState<Real>& state, const SolverKind& kind, Oracle<Real>& oracle) {
    std::visit(
        [&](const auto& params) {
            using P = std::decay_t<decltype(params)>;
            if constexpr (std::is_same_v<P, StpParams>)
                stp_step(state, params, oracle);
            else if constexpr (std::is_same_v<P, RgfParams>)
                rgf_step(state, params, oracle);
            else
                gld_step(state, params, oracle);
        },
        kind);
}

/// Everything a step observer can see about one completed iteration.
template <class Real>
struct StepView {
    std::uint64_t t;
    std::span<const Real> theta_before;
    std::span<const Real> theta_after;
    std::span<const Real> direction;
    const Real& f_before;
    const Real& f_after;
    const std::optional<Real>& alpha;
};

template <class Real>
using StepObserver = std::function<void(const StepView<Real>&)>;

/// Run `iterations` steps from `theta_init` and record iterate t at t = 1,
/// every multiple of `record_every`, and the final iterate (t = iterations + 1,
/// or the iteration at which the schedule ran out). The gradient norm and its
/// running minimum are tracked at every iterate.
template <class Real>
Trajectory run_trajectory(const SolverKind& kind, Objective<Real> objective,
                          const Vec<Real>& theta_init, std::uint64_t iterations,
                          std::uint64_t seed, std::uint64_t record_every,
                          const StepObserver<Real>& observer = {}) {
    validate(kind);
    if (iterations == 0) throw InvalidInput("run_trajectory: iterations must be >= 1");
    if (record_every == 0) throw InvalidInput("run_trajectory: record_every must be >= 1");
    if (const auto* p = std::get_if<StpParams>(&kind)) {
        if (const auto* d = std::get_if<DirectionalSchedule>(&p->schedule);
            d && d->L != objective.info().L)
            throw InvalidInput("directional schedule L does not match the objective's L");
    }

    Trajectory out;
    out.seed = seed;
    out.solver = std::string(solver_name(kind));
    out.objective = objective.info().name();
    out.schedule = describe_schedule(kind);

    objective.reset_counter();
    Oracle<Real> oracle(objective);
    auto state = initial_state<Real>(oracle, theta_init, seed);

    Vec<Real> grad(objective.dim());
    Vec<Real> before;
    double min_grad = std::numeric_limits<double>::infinity();
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&start] {
        return static_cast<std::int64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                             std::chrono::steady_clock::now() - start)
                                             .count());
    };
    auto snapshot = [&](std::uint64_t t) {
        objective.gradient_into(state.theta, grad);
        const double gn = to_double(norm2<Real>(grad));
        min_grad = std::min(min_grad, gn);
        return TrajectoryRecord{t, to_double(state.f_current), gn, min_grad, std::nullopt,
                                oracle.evaluations(), elapsed()};
    };

    for (std::uint64_t t = 1; t <= iterations; ++t) {
        auto rec = snapshot(t);
        const bool keep = (t == 1 || t % record_every == 0);
        if (keep) out.records.push_back(rec);
        if (observer) before = state.theta;
        const Real f_before = state.f_current;

        step(state, kind, oracle);
        if (state.terminal) {
            out.terminal_reason = state.terminal_reason;
            break;
        }
        if (keep && state.last_alpha) out.records.back().alpha = to_double(*state.last_alpha);
        if (observer)
            observer(StepView<Real>{t, before, state.theta, state.direction, f_before,
                                    state.f_current, state.last_alpha});
    }
    if (out.records.empty() || out.records.back().t != state.t) out.records.push_back(snapshot(state.t));
    return out;
}

}  // namespace stp
