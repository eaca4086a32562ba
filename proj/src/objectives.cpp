#include "stp/objectives.hpp"

namespace stp {

std::string_view to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::NesterovChain: return "nesterov_chain";
        case ObjectiveKind::SphereQuadratic: return "sphere_quadratic";
        case ObjectiveKind::HuberChain: return "huber_chain";
    }
    return "?";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
    if (name == "nesterov_chain") return ObjectiveKind::NesterovChain;
    if (name == "sphere_quadratic") return ObjectiveKind::SphereQuadratic;
    if (name == "huber_chain") return ObjectiveKind::HuberChain;
    throw InvalidInput("unknown objective '" + std::string(name) + "'");
}

ObjectiveInfo describe_objective(ObjectiveKind kind, std::size_t dim) {
    if (dim == 0) throw InvalidDimension("objective dimension must be >= 1");
    const double d = static_cast<double>(dim);
    switch (kind) {
        case ObjectiveKind::NesterovChain:
            // f* = -1/2 e1^T A^{-1} e1 = -d / (2(d+1)). Run as merely smooth (mu = 0).
            return {kind, dim, 4.0, 0.0, -d / (2.0 * (d + 1.0)), true};
        case ObjectiveKind::SphereQuadratic:
            return {kind, dim, 1.0, 1.0, 0.0, true};
        case ObjectiveKind::HuberChain:
            return {kind, dim, 1.0, 0.0, 0.0, true};
    }
    throw InvalidInput("describe_objective: unknown kind");
}

std::vector<double> minimizer(ObjectiveKind kind, std::size_t dim) {
    if (dim == 0) throw InvalidDimension("objective dimension must be >= 1");
    std::vector<double> x(dim, 0.0);
    if (kind == ObjectiveKind::NesterovChain) {
        // A x = e1 has the linear solution x_i = 1 - i/(d+1).
        const double d1 = static_cast<double>(dim) + 1.0;
        for (std::size_t i = 0; i < dim; ++i) x[i] = 1.0 - static_cast<double>(i + 1) / d1;
    }
    return x;
}

std::vector<double> point_at_level(ObjectiveKind kind, std::size_t dim, double level) {
    if (dim == 0) throw InvalidDimension("objective dimension must be >= 1");
    if (!(level >= 0)) throw InvalidInput("point_at_level: level must be >= 0");
    std::vector<double> x(dim, 0.0);
    switch (kind) {
        case ObjectiveKind::SphereQuadratic:
            x[0] = std::sqrt(2.0 * level);
            return x;
        case ObjectiveKind::HuberChain:
            x[0] = std::sqrt((1.0 + level) * (1.0 + level) - 1.0);
            return x;
        case ObjectiveKind::NesterovChain:
            break;
    }
    throw UnsupportedObjective("point_at_level: not available for " +
                               std::string(to_string(kind)));
}

}  // namespace stp
