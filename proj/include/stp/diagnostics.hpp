#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stp/directions.hpp"
#include "stp/numeric.hpp"
#include "stp/objectives.hpp"
#include "stp/rng.hpp"
#include "stp/trajectory.hpp"

namespace stp {

// ---------------------------------------------------------------------------
// Descent inequalities

struct ExpectedDecreaseCheck {
    double lhs_mean;    // Monte Carlo mean of min(f(x), f(x + a s), f(x - a s))
    double lhs_stderr;
    double rhs;         // f(x) - mu_D a ||grad f(x)|| + L a^2 / 2
    bool holds;         // lhs_mean - 3 stderr <= rhs (up to rounding)
};

/// Expected one-step decrease of the three-point update at x with step a.
/// `mu_D` defaults to the analytic constant of `kind`.
ExpectedDecreaseCheck check_expected_decrease(Objective<double> objective,
                                              std::span<const double> x, double alpha,
                                              DirectionKind kind, std::size_t n_samples,
                                              SeededRng& rng,
                                              std::optional<double> mu_D = std::nullopt);

struct InequalityCheck {
    double lhs;
    double rhs;
    bool holds;
};

/// Per-step bound for the directional schedule with base h at iteration t:
///   f(x_after) <= f(x_before) - <grad f(x_before), s>^2 / (2L) + (L/8) h^-2t
/// evaluated with the diagnostic gradient, additive tolerance 1e-12 max(1, |f|).
template <class Real>
InequalityCheck check_directional_step_decrease(Objective<Real> objective,
                                                std::span<const Real> x_before,
                                                std::span<const Real> x_after,
                                                std::span<const Real> direction, std::uint64_t t,
                                                double h) {
    using std::abs;
    using std::pow;
    const Real L(objective.info().L);
    const Real f_before = objective.evaluate(x_before);
    const Real f_after = objective.evaluate(x_after);
    const Vec<Real> g = objective.gradient(x_before);
    const Real slope = dot<Real>(g, direction);
    const Real offset_sq = pow(Real(h), -2 * static_cast<long long>(t));
    const Real rhs = f_before - slope * slope / (2 * L) + L / 8 * offset_sq;
    const Real scale = abs(f_before) > 1 ? abs(f_before) : Real(1);
    const bool holds = f_after <= rhs + Real(1e-12) * scale;
    return {to_double(f_after), to_double(rhs), holds};
}

// ---------------------------------------------------------------------------
// Constants for the harmonic schedule on convex objectives

/// Upper bound on sup ||x - x*||_2 over {f <= f(x_init)}, computed in closed
/// form and cross-checked on `n_probe` random boundary points. Returns 0 when
/// x_init is already optimal.
double estimate_sublevel_radius(const ObjectiveInfo& info, std::span<const double> x_init,
                                std::size_t n_probe, SeededRng& rng);

struct HarmonicRateConstants {
    double R;
    double alpha;
    double a;  // E f(x_T) - f* <= a / T
};

/// alpha = 2R / mu_D and the matching constant a.
HarmonicRateConstants harmonic_rate_constants(const ObjectiveInfo& info, double initial_gap,
                                              double R, double mu_D);

/// Constant a for an explicit alpha > R / mu_D.
HarmonicRateConstants harmonic_rate_constants(const ObjectiveInfo& info, double initial_gap,
                                              double R, double mu_D, double alpha);

/// Right-hand side of the expected-gap bound for the directional schedule:
///   (1 - q)^(T-1) [gap_1 + (L/8) / (h^2 (1 - q) - 1)],  q = mu_D^2 mu / L.
double linear_rate_gap_bound(double initial_gap, double mu_D, double mu, double L, double h,
                             std::uint64_t T);

// ---------------------------------------------------------------------------
// Rate estimation

struct SeriesPoint {
    double t;
    double value;
};

struct RateFit {
    double exponent_estimate;
    double intercept;
    double r_squared;
    double t_lo;
    double t_hi;
};

/// Least squares of log(value) against log(t) over the last `window_fraction`
/// of the points. Nonpositive values are dropped.
RateFit rate_fit(std::span<const SeriesPoint> series, double window_fraction);

/// exp(slope) of log(gap) against t over the points with gap > 1e-12.
double geometric_rate_fit(std::span<const SeriesPoint> series);

/// Largest v_j / min_{i<j} v_i over the sequence (1 for a non-increasing one).
double max_rise(std::span<const double> values);

/// Every value is at most (1 + slack) times every earlier value.
bool nonincreasing_within(std::span<const double> values, double slack);

struct BoundedRateResult {
    double max_tail_value;   // max over trajectories of t^exponent * min grad at the last grid point
    double worst_rise;       // largest max_rise over trajectory tails
    std::vector<bool> nonincreasing;  // per trajectory
    bool all_nonincreasing;
};

/// u(t) = t^exponent * min_{s<=t} ||grad f(x_s)|| over the last `tail_fraction`
/// of a shared recording grid.
BoundedRateResult bounded_rate_check(std::span<const Trajectory> trajectories, double exponent,
                                     double slack = 0.05, double tail_fraction = 0.5);

/// Largest rise of t^exponent * values[t] over the last `tail_fraction` of points.
double power_scaled_tail_rise(std::span<const double> t, std::span<const double> values,
                              double exponent, double tail_fraction);

enum class CurveField { FGap, GradNorm, MinGradNorm };

struct CurvePoint {
    double t;
    double mean;
    double std_error;
};

/// Pointwise mean and standard error across trajectories on a common grid.
std::vector<CurvePoint> expectation_curve(std::span<const Trajectory> trajectories,
                                          CurveField field, double f_star = 0.0);

std::vector<SeriesPoint> mean_series(std::span<const CurvePoint> curve);

// ---------------------------------------------------------------------------
// Per-trajectory checks

/// Exact: every recorded f value is <= its predecessor.
bool is_monotone(const Trajectory& trajectory);

struct LastIterateResult {
    double head_median;
    double tail_median;
    bool pass;  // tail_median <= ratio * head_median
};

LastIterateResult last_iterate_check(const Trajectory& trajectory, double head_fraction = 0.1,
                                     double tail_fraction = 0.1, double ratio = 0.1);

struct ScaledGapResult {
    double worst_rise;
    std::size_t points;
    bool pass;
};

/// (f(x_t) - f*) / contraction^t over the final `tail_fraction` of the records
/// taken while the gap exceeds `gap_floor` must be non-increasing within slack.
ScaledGapResult scaled_gap_check(const Trajectory& trajectory, double f_star, double contraction,
                                 double tail_fraction = 0.25, double slack = 0.05,
                                 double gap_floor = 1e-12);

double median(std::vector<double> values);

}  // namespace stp
