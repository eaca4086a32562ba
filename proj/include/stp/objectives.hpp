#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stp/errors.hpp"
#include "stp/numeric.hpp"

namespace stp {

enum class ObjectiveKind {
    NesterovChain,    // 1/2 x1^2 + 1/2 sum (x_{i+1}-x_i)^2 + 1/2 x_d^2 - x1
    SphereQuadratic,  // 1/2 ||x||^2
    HuberChain,       // sum sqrt(1 + x_i^2) - 1
};

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);

/// Static description of a test function.
struct ObjectiveInfo {
    ObjectiveKind kind;
    std::size_t dim;
    double L;   // gradient Lipschitz constant (an upper bound)
    double mu;  // strong convexity modulus, 0 when not used
    std::optional<double> f_star;
    bool known_minimizer;  // minimizer available in closed form

    std::string name() const { return std::string(to_string(kind)); }
};

ObjectiveInfo describe_objective(ObjectiveKind kind, std::size_t dim);

/// Minimizer in closed form; throws UnsupportedObjective otherwise.
std::vector<double> minimizer(ObjectiveKind kind, std::size_t dim);

namespace detail {

template <class Real>
Real nesterov_chain_value(std::span<const Real> x) {
    const std::size_t d = x.size();
    Real acc = x[0] * x[0] + x[d - 1] * x[d - 1];
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const Real diff = x[i + 1] - x[i];
        acc += diff * diff;
    }
    return acc / 2 - x[0];
}

// Tridiagonal stencil (2 on the diagonal, -1 off it) minus e1.
template <class Real>
void nesterov_chain_gradient(std::span<const Real> x, std::span<Real> g) {
    const std::size_t d = x.size();
    for (std::size_t i = 0; i < d; ++i) {
        Real v = 2 * x[i];
        if (i > 0) v -= x[i - 1];
        if (i + 1 < d) v -= x[i + 1];
        g[i] = v;
    }
    g[0] -= 1;
}

template <class Real>
Real huber_chain_value(std::span<const Real> x) {
    using std::sqrt;
    Real acc = 0;
    for (const auto& v : x) acc += sqrt(1 + v * v) - 1;
    return acc;
}

}  // namespace detail

/// Black-box test function with a call counter.
///
/// `evaluate` is the zeroth-order oracle; `gradient` is a diagnostic side
/// channel that is not counted. Solvers only ever see an Oracle, which
/// exposes `evaluate` alone.
template <class Real>
class Objective {
public:
    Objective(ObjectiveKind kind, std::size_t dim) : info_(describe_objective(kind, dim)) {}

    const ObjectiveInfo& info() const noexcept { return info_; }
    std::size_t dim() const noexcept { return info_.dim; }
    std::uint64_t evaluations() const noexcept { return evals_; }
    void reset_counter() noexcept { evals_ = 0; }

    Real evaluate(std::span<const Real> x) {
        check_input(x);
        ++evals_;
        return value(x);
    }

    void gradient_into(std::span<const Real> x, std::span<Real> g) const {
        check_input(x);
        if (g.size() != info_.dim) throw InvalidInput("gradient: output has wrong dimension");
        switch (info_.kind) {
            case ObjectiveKind::NesterovChain:
                detail::nesterov_chain_gradient<Real>(x, g);
                break;
            case ObjectiveKind::SphereQuadratic:
                for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i];
                break;
            case ObjectiveKind::HuberChain: {
                using std::sqrt;
                for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] / sqrt(1 + x[i] * x[i]);
                break;
            }
        }
    }

    Vec<Real> gradient(std::span<const Real> x) const {
        Vec<Real> g(info_.dim);
        gradient_into(x, g);
        return g;
    }

private:
    void check_input(std::span<const Real> x) const {
        if (x.size() != info_.dim)
            throw InvalidInput("objective " + info_.name() + ": expected dimension " +
                               std::to_string(info_.dim) + ", got " + std::to_string(x.size()));
        if (!all_finite(x)) throw InvalidInput("objective " + info_.name() + ": non-finite input");
    }

    Real value(std::span<const Real> x) const {
        switch (info_.kind) {
            case ObjectiveKind::NesterovChain: return detail::nesterov_chain_value(x);
            case ObjectiveKind::SphereQuadratic: return dot(x, x) / 2;
            case ObjectiveKind::HuberChain: return detail::huber_chain_value(x);
        }
        return Real(0);
    }

    ObjectiveInfo info_;
    std::uint64_t evals_ = 0;
};

/// Value-only view of an Objective handed to solvers.
template <class Real>
class Oracle {
public:
    explicit Oracle(Objective<Real>& objective) : objective_(&objective) {}

    Real operator()(std::span<const Real> x) { return objective_->evaluate(x); }
    std::size_t dim() const noexcept { return objective_->dim(); }
    std::uint64_t evaluations() const noexcept { return objective_->evaluations(); }

private:
    Objective<Real>* objective_;
};

/// Point whose gap f(x) - f_star equals `level`, reached by moving the first
/// coordinate away from the minimizer. Supported for the sphere and Huber chain.
std::vector<double> point_at_level(ObjectiveKind kind, std::size_t dim, double level);

}  // namespace stp
