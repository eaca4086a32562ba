#include <doctest.h>

#include <cmath>
#include <limits>

#include "stp/objectives.hpp"
#include "stp/solvers.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace stp;

namespace {

const ObjectiveKind kAll[] = {ObjectiveKind::NesterovChain, ObjectiveKind::SphereQuadratic,
                              ObjectiveKind::HuberChain};

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_SUITE("objectives") {
    TEST_CASE("evaluation examples") {
        Objective<double> nest(ObjectiveKind::NesterovChain, 500);
        CHECK(nest.evaluate(std::vector<double>(500, 0.0)) == 0.0);
        Objective<double> nest3(ObjectiveKind::NesterovChain, 3);
        CHECK(nest3.evaluate(std::vector<double>{1, 0, 0}) == 0.0);
        Objective<double> sphere(ObjectiveKind::SphereQuadratic, 2);
        CHECK(sphere.evaluate(std::vector<double>{3, 4}) == 12.5);
    }

    TEST_CASE("gradient examples") {
        for (std::size_t d : {1u, 2u, 7u, 500u}) {
            Objective<double> nest(ObjectiveKind::NesterovChain, d);
            const auto g = nest.gradient(std::vector<double>(d, 0.0));
            CHECK(g[0] == -1.0);
            for (std::size_t i = 1; i < d; ++i) CHECK(g[i] == 0.0);
            CHECK(norm2<double>(g) == 1.0);
        }
        Objective<double> sphere(ObjectiveKind::SphereQuadratic, 2);
        CHECK(sphere.gradient(std::vector<double>{3, 4}) == std::vector<double>{3, 4});

        Objective<double> huber(ObjectiveKind::HuberChain, 1);
        const double g = huber.gradient(std::vector<double>{1.0})[0];
        CHECK(g == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
        const double fd = oracle::fd_gradient(huber, {1.0})[0];
        CHECK(std::abs(fd - g) < 1e-8);
    }

    TEST_CASE("the counter tracks evaluate calls only") {
        Objective<double> f(ObjectiveKind::HuberChain, 4);
        const std::vector<double> x{1, 2, 3, 4};
        for (int i = 1; i <= 5; ++i) {
            f.evaluate(x);
            CHECK(f.evaluations() == static_cast<std::uint64_t>(i));
        }
        f.gradient(x);
        CHECK(f.evaluations() == 5);
        Oracle<double> o(f);
        o(x);
        CHECK(f.evaluations() == 6);
        CHECK(o.evaluations() == 6);
        f.reset_counter();
        CHECK(f.evaluations() == 0);
    }

    TEST_CASE("dimension mismatch and non-finite input are rejected") {
        for (auto kind : kAll) {
            Objective<double> f(kind, 3);
            CHECK_THROWS_AS(f.evaluate(std::vector<double>{1, 2}), InvalidInput);
            CHECK_THROWS_AS(f.gradient(std::vector<double>{1, 2, 3, 4}), InvalidInput);
            CHECK_THROWS_AS(f.evaluate(std::vector<double>{1, std::nan(""), 3}), InvalidInput);
            CHECK_THROWS_AS(f.evaluate(std::vector<double>{1, 2, std::numeric_limits<double>::infinity()}),
                            InvalidInput);
            CHECK(f.evaluations() == 0);
        }
        CHECK_THROWS_AS(describe_objective(ObjectiveKind::SphereQuadratic, 0), InvalidDimension);
    }

    TEST_CASE("declared constants") {
        const auto n = describe_objective(ObjectiveKind::NesterovChain, 500);
        CHECK(n.L == 4.0);
        CHECK(n.mu == 0.0);
        REQUIRE(n.f_star);
        Objective<double> nest(ObjectiveKind::NesterovChain, 500);
        CHECK(nest.evaluate(minimizer(ObjectiveKind::NesterovChain, 500)) ==
              doctest::Approx(*n.f_star).epsilon(1e-12));
        CHECK(norm2<double>(nest.gradient(minimizer(ObjectiveKind::NesterovChain, 500))) < 1e-12);

        const auto s = describe_objective(ObjectiveKind::SphereQuadratic, 3);
        CHECK(s.L == 1.0);
        CHECK(s.mu == 1.0);
        CHECK(*s.f_star == 0.0);
        const auto h = describe_objective(ObjectiveKind::HuberChain, 3);
        CHECK(h.L == 1.0);
        CHECK(h.mu == 0.0);
        CHECK(*h.f_star == 0.0);
        CHECK(minimizer(ObjectiveKind::HuberChain, 3) == std::vector<double>(3, 0.0));
    }

    TEST_CASE("finite-difference consistency on 100 random points") {
        for (auto kind : kAll) {
            for (std::size_t d : {1u, 10u, 500u}) {
                CAPTURE(to_string(kind));
                CAPTURE(d);
                Objective<double> f(kind, d);
                gen::for_all(d * 31 + static_cast<int>(kind), 100, [&](gen::Gen& g, std::size_t) {
                    const auto x = g.gaussian(d, g.log_uniform(0.1, 3.0));
                    REQUIRE(oracle::fd_relative_error(f, x) <= 1e-5);
                });
            }
        }
    }

    TEST_CASE("smoothness witness on 1000 random pairs") {
        for (auto kind : kAll) {
            const std::size_t d = 10;
            Objective<double> f(kind, d);
            const double L = f.info().L;
            gen::for_all(40 + static_cast<int>(kind), 1000, [&](gen::Gen& g, std::size_t) {
                const auto x = g.gaussian(d, 3.0);
                const auto y = g.gaussian(d, 3.0);
                REQUIRE(dist(f.gradient(x), f.gradient(y)) <= L * dist(x, y) * (1 + 1e-12));
            });
        }
    }

    TEST_CASE("strong convexity and PL witnesses for the sphere") {
        const std::size_t d = 10;
        Objective<double> f(ObjectiveKind::SphereQuadratic, d);
        const double mu = f.info().mu;
        gen::for_all(50, 1000, [&](gen::Gen& g, std::size_t) {
            const auto x = g.gaussian(d, 2.0);
            const auto y = g.gaussian(d, 2.0);
            const auto gx = f.gradient(x);
            double lin = 0;
            for (std::size_t i = 0; i < d; ++i) lin += gx[i] * (y[i] - x[i]);
            const double lower = f.evaluate(x) + lin + mu / 2 * dist(x, y) * dist(x, y);
            REQUIRE(f.evaluate(y) >= lower - 1e-12 * std::max(1.0, std::abs(lower)));
            const double gn = norm2<double>(gx);
            REQUIRE(gn * gn / (2 * mu) >= f.evaluate(x) - *f.info().f_star - 1e-12);
        });
    }

    TEST_CASE("evaluation accounting after T STP iterations") {
        const std::uint64_t T = 137;
        Objective<double> f(ObjectiveKind::SphereQuadratic, 5);
        const std::vector<double> x0(5, 1.0);
        const auto power = run_trajectory<double>(StpParams{}, f, x0, T, 3, 10);
        CHECK(power.records.back().evals == 2 * T + 1);
        const StpParams dir{DirectionKind::UnitSphere, DirectionalSchedule{1, 2.1}};
        const auto directional = run_trajectory<double>(dir, f, x0, T, 3, 10);
        CHECK(directional.records.back().evals == 3 * T + 1);
    }

    TEST_CASE("extended precision agrees with double") {
        for (auto kind : kAll) {
            Objective<double> fd(kind, 20);
            Objective<ExtendedReal> fe(kind, 20);
            gen::for_all(60, 20, [&](gen::Gen& g, std::size_t) {
                const auto x = g.gaussian(20);
                const auto xe = convert_vector<ExtendedReal>(x);
                REQUIRE(fd.evaluate(x) == doctest::Approx(to_double(fe.evaluate(xe))).epsilon(1e-13));
            });
        }
    }

    TEST_CASE("points at a given level") {
        for (double c : {0.0, 0.5, 1.0, 7.0}) {
            Objective<double> s(ObjectiveKind::SphereQuadratic, 3);
            CHECK(s.evaluate(point_at_level(ObjectiveKind::SphereQuadratic, 3, c)) ==
                  doctest::Approx(c).epsilon(1e-14));
            Objective<double> h(ObjectiveKind::HuberChain, 4);
            CHECK(h.evaluate(point_at_level(ObjectiveKind::HuberChain, 4, c)) == doctest::Approx(c).epsilon(1e-14));
        }
        CHECK(point_at_level(ObjectiveKind::HuberChain, 1, 1.0)[0] == doctest::Approx(std::sqrt(3.0)));
        CHECK_THROWS_AS(point_at_level(ObjectiveKind::NesterovChain, 3, 1.0), UnsupportedObjective);
        CHECK_THROWS_AS(point_at_level(ObjectiveKind::HuberChain, 3, -1.0), InvalidInput);
    }

    TEST_CASE("objective names round-trip") {
        for (auto kind : kAll) CHECK(parse_objective_kind(to_string(kind)) == kind);
        CHECK_THROWS_AS(parse_objective_kind("rosenbrock"), InvalidInput);
    }
}
