#include <doctest.h>

#include <cmath>

#include "stp/diagnostics.hpp"
#include "stp/solvers.hpp"
#include "support/generators.hpp"

using namespace stp;

namespace {

SolverState<double> state_at(Oracle<double>& oracle, std::vector<double> x) {
    return initial_state<double>(oracle, std::move(x), 0);
}

}  // namespace

TEST_SUITE("solvers") {
    TEST_CASE("three-point update picks the best candidate") {
        Objective<double> f(ObjectiveKind::SphereQuadratic, 1);
        Oracle<double> o(f);
        auto s = state_at(o, {1.0});
        const std::vector<double> dir{1.0};
        three_point_update<double>(s, dir, 0.5, o);
        CHECK(s.theta == std::vector<double>{0.5});
        CHECK(s.f_current == 0.125);
        CHECK(s.t == 2);
        CHECK(*s.last_alpha == 0.5);
        CHECK(o.evaluations() == 3);
    }

    TEST_CASE("three-point update keeps the point when both moves are worse or tie") {
        Objective<double> f(ObjectiveKind::SphereQuadratic, 2);
        Oracle<double> o(f);
        auto s = state_at(o, {1.0, 0.0});
        const std::vector<double> orth{0.0, 1.0};
        three_point_update<double>(s, orth, 0.3, o);
        CHECK(s.theta == std::vector<double>{1.0, 0.0});
        CHECK(s.f_current == 0.5);

        // f(1 - 2) == f(1): a tie does not move.
        Objective<double> g(ObjectiveKind::SphereQuadratic, 1);
        Oracle<double> og(g);
        auto t = state_at(og, {1.0});
        const std::vector<double> dir{1.0};
        three_point_update<double>(t, dir, 2.0, og);
        CHECK(t.theta == std::vector<double>{1.0});
    }

    TEST_CASE("first STP step on the chain does not increase f") {
        Objective<double> f(ObjectiveKind::NesterovChain, 500);
        Oracle<double> o(f);
        auto s = initial_state<double>(o, std::vector<double>(500, 0.0), 1234);
        CHECK(s.f_current == 0.0);
        stp_step(s, StpParams{}, o);
        CHECK(s.f_current <= 0.0);
        CHECK(f.evaluate(s.theta) == s.f_current);
    }

    TEST_CASE("RGF update examples") {
        Objective<double> f(ObjectiveKind::SphereQuadratic, 1);
        Oracle<double> o(f);
        auto s = state_at(o, {1.0});
        const std::vector<double> u{1.0};
        rgf_update<double>(s, u, RgfParams{1e-4, 1.0}, o);
        CHECK(s.theta[0] == doctest::Approx(-5e-5).epsilon(1e-6));
        CHECK(s.f_current == f.evaluate(s.theta));
        CHECK_FALSE(s.last_alpha);

        // At the minimizer the forward difference is biased by mu/2.
        auto z = state_at(o, {0.0});
        rgf_update<double>(z, u, RgfParams{1e-4, 0.25}, o);
        CHECK(z.theta[0] == doctest::Approx(-(1e-4 / 2) * 0.25).epsilon(1e-9));
    }

    TEST_CASE("GLD radii") {
        CHECK(gld_levels(1e-5, 1e-4) == 4);
        const auto r = gld_radii(1e-5, 1e-4);
        REQUIRE(r.size() == 5);
        const double expected[] = {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6};
        for (int k = 0; k < 5; ++k) CHECK(r[k] == doctest::Approx(expected[k]).epsilon(1e-15));
        CHECK(gld_levels(0.25, 0.5) == 1);
        CHECK(gld_levels(1.0, 8.0) == 3);
        CHECK_THROWS_AS(validate(SolverKind{GldParams{DirectionKind::UnitSphere, 1e-4, 1e-5}}), InvalidInput);
        CHECK_THROWS_AS(validate(SolverKind{RgfParams{0.0, 0.25}}), InvalidInput);
        CHECK_THROWS_AS(validate(SolverKind{RgfParams{1e-4, -1.0}}), InvalidInput);
    }

    TEST_CASE("GLD in one dimension matches sign enumeration") {
        const GldParams params{DirectionKind::UnitSphere, 0.25, 0.5};
        for (std::uint64_t seed = 0; seed < 64; ++seed) {
            // Predict the candidates from an identical generator.
            SeededRng r(seed);
            const double s0 = sample_direction(DirectionKind::UnitSphere, 1, r)[0];
            const double s1 = sample_direction(DirectionKind::UnitSphere, 1, r)[0];
            double best_x = 1.0, best_f = 0.5;
            for (double c : {1.0 + 0.5 * s0, 1.0 + 0.25 * s1})
                if (0.5 * c * c < best_f) best_x = c, best_f = 0.5 * c * c;

            Objective<double> f(ObjectiveKind::SphereQuadratic, 1);
            Oracle<double> o(f);
            auto s = initial_state<double>(o, {1.0}, seed);
            gld_step(s, params, o);
            CHECK(s.theta[0] == best_x);
            CHECK((s.f_current < 0.5) == (s0 < 0 || s1 < 0));
            CHECK(o.evaluations() == 3);
        }
    }

    TEST_CASE("GLD stays at the minimizer") {
        Objective<double> f(ObjectiveKind::SphereQuadratic, 4);
        Oracle<double> o(f);
        auto s = initial_state<double>(o, std::vector<double>(4, 0.0), 9);
        gld_step(s, GldParams{}, o);
        CHECK(s.theta == std::vector<double>(4, 0.0));
    }

    TEST_CASE("oracle-call accounting per solver") {
        const std::uint64_t T = 50;
        Objective<double> f(ObjectiveKind::NesterovChain, 20);
        const std::vector<double> x0(20, 0.0);
        const std::pair<SolverKind, std::uint64_t> cases[] = {
            {StpParams{}, 1 + 2 * T},
            {StpParams{DirectionKind::ScaledGaussian, HarmonicSchedule{1.0}}, 1 + 2 * T},
            {StpParams{DirectionKind::UnitSphere, DirectionalSchedule{4.0, 2.0}}, 1 + 3 * T},
            {RgfParams{}, 1 + 2 * T},
            {GldParams{}, 1 + 5 * T},
        };
        for (const auto& [kind, expected] : cases) {
            CAPTURE(solver_name(kind));
            const auto tr = run_trajectory<double>(kind, f, x0, T, 1, 7);
            CHECK(tr.records.back().t == T + 1);
            CHECK(tr.records.back().evals == expected);
            CHECK(evals_per_step(kind) == (expected - 1) / T);
        }
    }

    TEST_CASE("STP and GLD are exactly monotone on every step") {
        gen::for_all(21, 40, [](gen::Gen& g, std::size_t) {
            const auto kind = g.pick<ObjectiveKind>(
                {ObjectiveKind::NesterovChain, ObjectiveKind::SphereQuadratic, ObjectiveKind::HuberChain});
            const std::size_t d = g.integer(1, 60);
            const auto dirs = g.pick<DirectionKind>({DirectionKind::UnitSphere, DirectionKind::ScaledGaussian});
            const SolverKind solver =
                g.uniform(0, 1) < 0.5 ? SolverKind{StpParams{dirs, PowerSchedule{g.log_uniform(0.01, 10), g.uniform(0.3, 1)}}}
                                      : SolverKind{GldParams{dirs, 1e-3, g.log_uniform(2e-3, 1)}};
            Objective<double> f(kind, d);
            bool ok = true;
            const StepObserver<double> obs = [&](const StepView<double>& v) {
                ok = ok && v.f_after <= v.f_before;
            };
            const auto tr = run_trajectory<double>(solver, f, g.gaussian(d), 300, g.rng()(), 1, obs);
            REQUIRE(ok);
            REQUIRE(is_monotone(tr));
        });
    }

    TEST_CASE("STP descent dominance on every step") {
        gen::for_all(22, 30, [](gen::Gen& g, std::size_t) {
            const auto kind = g.pick<ObjectiveKind>(
                {ObjectiveKind::NesterovChain, ObjectiveKind::SphereQuadratic, ObjectiveKind::HuberChain});
            const std::size_t d = g.integer(1, 40);
            Objective<double> f(kind, d);
            const double L = f.info().L;
            const StpParams params{DirectionKind::UnitSphere, PowerSchedule{g.log_uniform(0.01, 4), 0.51}};
            bool ok = true;
            const StepObserver<double> obs = [&](const StepView<double>& v) {
                const auto grad = f.gradient(v.theta_before);
                const double a = *v.alpha;
                const double sn = norm2<double>(v.direction);
                const double rhs = v.f_before - a * std::abs(dot<double>(grad, v.direction)) + L / 2 * a * a * sn * sn;
                ok = ok && v.f_after <= rhs + 1e-12 * std::max(1.0, std::abs(v.f_before));
            };
            run_trajectory<double>(params, f, g.gaussian(d), 300, g.rng()(), 50, obs);
            REQUIRE(ok);
        });
    }

    TEST_CASE("directional per-step inequality holds in extended precision") {
        gen::for_all(23, 5, [](gen::Gen& g, std::size_t) {
            const std::size_t d = g.integer(1, 12);
            Objective<ExtendedReal> f(ObjectiveKind::SphereQuadratic, d);
            const double mu_D = analytic_constants(DirectionKind::UnitSphere, d).mu_D;
            const double h = probe_base_for_linear_rate(mu_D, 1, 1);
            const StpParams params{DirectionKind::UnitSphere, DirectionalSchedule{1, h}};
            std::size_t bad = 0;
            const StepObserver<ExtendedReal> obs = [&](const StepView<ExtendedReal>& v) {
                if (!check_directional_step_decrease<ExtendedReal>(f, v.theta_before, v.theta_after, v.direction,
                                                                   v.t, h).holds)
                    ++bad;
            };
            run_trajectory<ExtendedReal>(params, f, convert_vector<ExtendedReal>(g.gaussian(d)), 150, g.rng()(),
                                         10, obs);
            REQUIRE(bad == 0);
        });
    }

    TEST_CASE("trajectory of a single step from zero on the chain") {
        Objective<double> f(ObjectiveKind::NesterovChain, 500);
        const auto tr = run_trajectory<double>(StpParams{}, f, std::vector<double>(500, 0.0), 1, 99, 100);
        REQUIRE(tr.records.size() == 2);
        CHECK(tr.records[0].t == 1);
        CHECK(tr.records[0].f_value == 0.0);
        CHECK(tr.records[0].grad_norm == 1.0);
        CHECK(tr.records[0].min_grad_norm == 1.0);
        CHECK(tr.records[0].alpha == 4.0);
        CHECK(tr.records[0].evals == 1);
        CHECK(tr.records[1].t == 2);
        CHECK(tr.records[1].f_value <= 0.0);
        CHECK_FALSE(tr.records[1].alpha);
        CHECK(tr.solver == "stp");
        CHECK(tr.objective == "nesterov_chain");
        CHECK(tr.schedule == "power(alpha=4,exponent=0.51)");
    }

    TEST_CASE("recording grid and running minimum") {
        Objective<double> f(ObjectiveKind::NesterovChain, 30);
        const auto tr = run_trajectory<double>(RgfParams{}, f, std::vector<double>(30, 0.0), 35, 5, 10);
        std::vector<std::uint64_t> ts;
        for (const auto& r : tr.records) ts.push_back(r.t);
        CHECK(ts == std::vector<std::uint64_t>{1, 10, 20, 30, 36});
        CHECK_NOTHROW(validate_trajectory(tr));
        for (const auto& r : tr.records) CHECK(r.min_grad_norm <= r.grad_norm);
    }

    TEST_CASE("same seed, same trajectory") {
        for (const SolverKind kind : {SolverKind{StpParams{}}, SolverKind{RgfParams{}}, SolverKind{GldParams{}}}) {
            Objective<double> f(ObjectiveKind::NesterovChain, 50);
            const std::vector<double> x0(50, 0.0);
            const auto a = run_trajectory<double>(kind, f, x0, 500, 17, 25);
            const auto b = run_trajectory<double>(kind, f, x0, 500, 17, 25);
            const auto c = run_trajectory<double>(kind, f, x0, 500, 18, 25);
            CHECK(same_except_elapsed(a, b));
            CHECK_FALSE(same_except_elapsed(a, c));
        }
    }

    TEST_CASE("run_trajectory input validation") {
        Objective<double> f(ObjectiveKind::SphereQuadratic, 3);
        const std::vector<double> x0(3, 1.0);
        CHECK_THROWS_AS(run_trajectory<double>(StpParams{}, f, x0, 0, 1, 1), InvalidInput);
        CHECK_THROWS_AS(run_trajectory<double>(StpParams{}, f, x0, 5, 1, 0), InvalidInput);
        CHECK_THROWS_AS(run_trajectory<double>(StpParams{}, f, std::vector<double>(2, 1.0), 5, 1, 1), InvalidInput);
        const StpParams mismatched{DirectionKind::UnitSphere, DirectionalSchedule{4.0, 2.0}};
        CHECK_THROWS_AS(run_trajectory<double>(mismatched, f, x0, 5, 1, 1), InvalidInput);
    }
}
