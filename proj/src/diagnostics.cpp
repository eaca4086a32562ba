#include "stp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stp/errors.hpp"

namespace stp {

namespace {

struct LineFit {
    double slope;
    double intercept;
    double r_squared;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0)) throw InsufficientData("least squares: abscissae are all equal");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        ss_res += r * r;
    }
    double r2 = 1.0;
    if (syy > 0) r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return {slope, intercept, r2};
}

std::size_t tail_start(std::size_t n, double fraction) {
    if (!(fraction > 0 && fraction <= 1)) throw InvalidInput("window fraction must lie in (0, 1]");
    const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    return n - std::min(n, keep);
}

}  // namespace

ExpectedDecreaseCheck check_expected_decrease(Objective<double> objective,
                                              std::span<const double> x, double alpha,
                                              DirectionKind kind, std::size_t n_samples,
                                              SeededRng& rng, std::optional<double> mu_D) {
    if (!(alpha > 0)) throw InvalidInput("check_expected_decrease: alpha must be > 0");
    if (n_samples < 1000) throw InvalidInput("check_expected_decrease: need at least 1000 samples");
    const std::size_t d = objective.dim();
    const double mu = mu_D ? *mu_D : analytic_constants(kind, d).mu_D;
    const double L = objective.info().L;

    const double f0 = objective.evaluate(x);
    const double grad_norm = norm2<double>(objective.gradient(x));

    std::vector<double> s(d), probe(d);
    double sum = 0, sum_sq = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        sample_direction<double>(kind, std::span<double>(s), rng);
        axpy_into<double>(x, alpha, s, probe);
        double best = std::min(f0, objective.evaluate(probe));
        axpy_into<double>(x, -alpha, s, probe);
        best = std::min(best, objective.evaluate(probe));
        sum += best;
        sum_sq += best * best;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    const double rhs = f0 - mu * alpha * grad_norm + L * alpha * alpha / 2.0;
    const double tol = 1e-12 * std::max(1.0, std::abs(f0));
    return {mean, se, rhs, mean - 3.0 * se <= rhs + tol};
}

double estimate_sublevel_radius(const ObjectiveInfo& info, std::span<const double> x_init,
                                std::size_t n_probe, SeededRng& rng) {
    if (x_init.size() != info.dim) throw InvalidInput("estimate_sublevel_radius: wrong dimension");
    if (info.kind == ObjectiveKind::NesterovChain)
        throw UnsupportedObjective("estimate_sublevel_radius: no closed-form radius for " +
                                   info.name());
    Objective<double> objective(info.kind, info.dim);
    const double level = objective.evaluate(x_init);
    const double gap = level - *info.f_star;
    if (!(gap > 0)) return 0.0;

    const double d = static_cast<double>(info.dim);
    double R = 0;
    if (info.kind == ObjectiveKind::SphereQuadratic) {
        R = std::sqrt(2.0 * gap);
    } else {
        // Each coordinate obeys sqrt(1 + x_i^2) - 1 <= level.
        R = std::sqrt(d) * std::sqrt((1.0 + level) * (1.0 + level) - 1.0);
    }

    // Both objectives are convex with minimizer 0, so f increases along every
    // ray from the origin and the sublevel boundary is found by bisection.
    std::vector<double> u(info.dim), x(info.dim);
    for (std::size_t i = 0; i < n_probe; ++i) {
        sample_direction<double>(DirectionKind::UnitSphere, std::span<double>(u), rng);
        for (std::size_t j = 0; j < info.dim; ++j) x[j] = 2 * R * u[j];
        if (objective.evaluate(x) <= level)
            throw Error("estimate_sublevel_radius: sublevel point found outside radius bound");
        double lo = 0, hi = 2 * R;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * R; ++it) {
            const double mid = 0.5 * (lo + hi);
            for (std::size_t j = 0; j < info.dim; ++j) x[j] = mid * u[j];
            (objective.evaluate(x) <= level ? lo : hi) = mid;
        }
        if (lo > R * (1 + 1e-9))
            throw Error("estimate_sublevel_radius: sublevel point found outside radius bound");
    }
    return R;
}

HarmonicRateConstants harmonic_rate_constants(const ObjectiveInfo& info, double initial_gap,
                                              double R, double mu_D) {
    if (!(R > 0)) throw DegenerateStart("harmonic_rate_constants: sublevel radius is zero");
    return harmonic_rate_constants(info, initial_gap, R, mu_D, 2.0 * R / mu_D);
}

HarmonicRateConstants harmonic_rate_constants(const ObjectiveInfo& info, double initial_gap,
                                              double R, double mu_D, double alpha) {
    if (!(R > 0)) throw DegenerateStart("harmonic_rate_constants: sublevel radius is zero");
    if (!(mu_D > 0)) throw InvalidInput("harmonic_rate_constants: mu_D must be > 0");
    const double ratio = alpha * mu_D / R;
    if (!(ratio > 1)) throw InvalidInput("harmonic_rate_constants: alpha must exceed R / mu_D");
    const double a = std::max(3.0 * ratio * initial_gap, info.L * alpha * alpha / (2.0 * (ratio - 1.0)));
    return {R, alpha, a};
}

double linear_rate_gap_bound(double initial_gap, double mu_D, double mu, double L, double h,
                             std::uint64_t T) {
    if (T < 1) throw InvalidInput("linear_rate_gap_bound: T must be >= 1");
    const double q = mu_D * mu_D * mu / L;
    const double denom = h * h * (1.0 - q) - 1.0;
    if (!(denom > 0)) throw InvalidInput("linear_rate_gap_bound: h too small for the rate");
    return std::pow(1.0 - q, static_cast<double>(T - 1)) * (initial_gap + L / 8.0 / denom);
}

RateFit rate_fit(std::span<const SeriesPoint> series, double window_fraction) {
    const std::size_t start = tail_start(series.size(), window_fraction);
    std::vector<double> lx, ly;
    for (std::size_t i = start; i < series.size(); ++i) {
        if (series[i].value > 0 && series[i].t > 0) {
            lx.push_back(std::log(series[i].t));
            ly.push_back(std::log(series[i].value));
        }
    }
    if (lx.size() < 10)
        throw InsufficientData("rate_fit: fewer than 10 positive points in the window");
    const auto fit = least_squares(lx, ly);
    return {fit.slope, fit.intercept, fit.r_squared, std::exp(lx.front()), std::exp(lx.back())};
}

double geometric_rate_fit(std::span<const SeriesPoint> series) {
    std::vector<double> x, y;
    for (const auto& p : series) {
        if (p.value > 1e-12) {
            x.push_back(p.t);
            y.push_back(std::log(p.value));
        }
    }
    if (x.size() < 10) throw InsufficientData("geometric_rate_fit: fewer than 10 usable points");
    return std::exp(least_squares(x, y).slope);
}

double max_rise(std::span<const double> values) {
    double worst = 1.0;
    if (values.empty()) return worst;
    double lowest = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double v = values[i];
        if (lowest > 0) worst = std::max(worst, v / lowest);
        else if (v > lowest) worst = std::numeric_limits<double>::infinity();
        lowest = std::min(lowest, v);
    }
    return worst;
}

bool nonincreasing_within(std::span<const double> values, double slack) {
    return max_rise(values) <= 1.0 + slack;
}

double power_scaled_tail_rise(std::span<const double> t, std::span<const double> values,
                              double exponent, double tail_fraction) {
    if (t.size() != values.size()) throw InvalidInput("power_scaled_tail_rise: size mismatch");
    std::vector<double> u;
    for (std::size_t i = tail_start(t.size(), tail_fraction); i < t.size(); ++i)
        u.push_back(std::pow(t[i], exponent) * values[i]);
    return max_rise(u);
}

BoundedRateResult bounded_rate_check(std::span<const Trajectory> trajectories, double exponent,
                                     double slack, double tail_fraction) {
    if (trajectories.empty()) throw InvalidInput("bounded_rate_check: no trajectories");
    BoundedRateResult out{0.0, 1.0, {}, true};
    const auto& grid = trajectories.front().records;
    for (const auto& traj : trajectories) {
        if (traj.records.size() != grid.size())
            throw InvalidInput("bounded_rate_check: trajectories do not share a grid");
        std::vector<double> t, v;
        for (std::size_t i = 0; i < traj.records.size(); ++i) {
            if (traj.records[i].t != grid[i].t)
                throw InvalidInput("bounded_rate_check: trajectories do not share a grid");
            t.push_back(static_cast<double>(traj.records[i].t));
            v.push_back(traj.records[i].min_grad_norm);
        }
        const double rise = power_scaled_tail_rise(t, v, exponent, tail_fraction);
        const bool ok = rise <= 1.0 + slack;
        out.nonincreasing.push_back(ok);
        out.all_nonincreasing = out.all_nonincreasing && ok;
        out.worst_rise = std::max(out.worst_rise, rise);
        out.max_tail_value = std::max(out.max_tail_value, std::pow(t.back(), exponent) * v.back());
    }
    return out;
}

std::vector<CurvePoint> expectation_curve(std::span<const Trajectory> trajectories,
                                          CurveField field, double f_star) {
    if (trajectories.size() < 2) throw InsufficientData("expectation_curve: need >= 2 trajectories");
    const auto& grid = trajectories.front().records;
    for (const auto& traj : trajectories) {
        if (traj.records.size() != grid.size())
            throw InvalidInput("expectation_curve: trajectories do not share a grid");
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (traj.records[i].t != grid[i].t)
                throw InvalidInput("expectation_curve: trajectories do not share a grid");
    }
    auto pick = [&](const TrajectoryRecord& r) {
        switch (field) {
            case CurveField::FGap: return r.f_value - f_star;
            case CurveField::GradNorm: return r.grad_norm;
            case CurveField::MinGradNorm: return r.min_grad_norm;
        }
        return 0.0;
    };
    const double n = static_cast<double>(trajectories.size());
    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double sum = 0;
        for (const auto& traj : trajectories) sum += pick(traj.records[i]);
        const double mean = sum / n;
        double ss = 0;
        for (const auto& traj : trajectories) {
            const double dv = pick(traj.records[i]) - mean;
            ss += dv * dv;
        }
        out.push_back({static_cast<double>(grid[i].t), mean, std::sqrt(ss / (n - 1.0) / n)});
    }
    return out;
}

std::vector<SeriesPoint> mean_series(std::span<const CurvePoint> curve) {
    std::vector<SeriesPoint> out;
    out.reserve(curve.size());
    for (const auto& p : curve) out.push_back({p.t, p.mean});
    return out;
}

bool is_monotone(const Trajectory& trajectory) {
    const auto& r = trajectory.records;
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i].f_value <= r[i - 1].f_value)) return false;
    return true;
}

double median(std::vector<double> values) {
    if (values.empty()) throw InsufficientData("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    double m = values[mid];
    if (values.size() % 2 == 0) {
        const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lower);
    }
    return m;
}

LastIterateResult last_iterate_check(const Trajectory& trajectory, double head_fraction,
                                     double tail_fraction, double ratio) {
    const auto& r = trajectory.records;
    if (r.size() < 2) throw InsufficientData("last_iterate_check: need >= 2 records");
    const auto n = r.size();
    const auto head = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(head_fraction * static_cast<double>(n))));
    const auto tail_from = tail_start(n, tail_fraction);
    std::vector<double> h, t;
    for (std::size_t i = 0; i < head; ++i) h.push_back(r[i].grad_norm);
    for (std::size_t i = tail_from; i < n; ++i) t.push_back(r[i].grad_norm);
    const double hm = median(h), tm = median(t);
    return {hm, tm, tm <= ratio * hm};
}

ScaledGapResult scaled_gap_check(const Trajectory& trajectory, double f_star, double contraction,
                                 double tail_fraction, double slack, double gap_floor) {
    if (!(contraction > 0 && contraction < 1))
        throw InvalidInput("scaled_gap_check: contraction must lie in (0, 1)");
    std::vector<double> t, gap;
    for (const auto& r : trajectory.records) {
        const double g = r.f_value - f_star;
        if (!(g > gap_floor)) break;
        t.push_back(static_cast<double>(r.t));
        gap.push_back(g);
    }
    if (gap.size() < 2) return {1.0, gap.size(), true};
    std::vector<double> scaled;
    for (std::size_t i = tail_start(gap.size(), tail_fraction); i < gap.size(); ++i)
        scaled.push_back(gap[i] * std::exp(-t[i] * std::log(contraction)));
    const double rise = max_rise(scaled);
    return {rise, scaled.size(), rise <= 1.0 + slack};
}

}  // namespace stp
