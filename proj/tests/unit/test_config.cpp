#include <doctest.h>

#include <cmath>

#include "stp/harness/config.hpp"
#include "support/generators.hpp"
#include "support/tempdir.hpp"

using namespace stp;
using namespace stp::harness;
using nlohmann::json;

namespace {

json base() {
    return json::parse(R"({
      "name": "t",
      "objective": {"name": "nesterov_chain", "dim": 500},
      "initial_point": "zeros",
      "solver": {"name": "stp"},
      "schedule": {"name": "power", "alpha": 4, "exponent": 0.51},
      "distribution": {"name": "unit_sphere"},
      "trajectories": 1,
      "iterations": 1,
      "base_seed": 7,
      "record_every": 1,
      "output_dir": "out/t"
    })");
}

std::string error_key(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("parse a full config") {
        const auto c = parse_config(base());
        CHECK(c.name == "t");
        CHECK(c.objective == ObjectiveKind::NesterovChain);
        CHECK(c.dim == 500);
        CHECK(c.initial_point.kind == InitialPoint::Kind::Zeros);
        CHECK(c.solver.kind == SolverSpec::Kind::Stp);
        REQUIRE(c.schedule);
        CHECK(*c.schedule->alpha == 4.0);
        CHECK(c.schedule->exponent == 0.51);
        CHECK(c.base_seed == 7);
        CHECK(c.output_dir == "out/t");
        CHECK_FALSE(c.precision);
    }

    TEST_CASE("errors name the offending key") {
        auto j = base();
        j["objective"]["name"] = "rosenbrock";
        CHECK(error_key(j) == "objective.name");

        j = base();
        j["solver"]["name"] = "cmaes";
        CHECK(error_key(j) == "solver.name");

        j = base();
        j["schedule"]["name"] = "cosine";
        CHECK(error_key(j) == "schedule.name");

        j = base();
        j["distribution"] = "coordinate";
        CHECK(error_key(j) == "distribution.name");

        j = base();
        j["trajectories"] = 0;
        CHECK(error_key(j) == "trajectories");

        j = base();
        j["iterations"] = "many";
        CHECK(error_key(j) == "iterations");

        j = base();
        j["schedule"]["stepsize"] = 1;
        CHECK(error_key(j) == "schedule.stepsize");

        j = base();
        j["colour"] = "red";
        CHECK(error_key(j) == "colour");

        j = base();
        j.erase("schedule");
        CHECK(error_key(j) == "schedule");

        j = base();
        j["solver"] = {{"name", "rgf"}};
        CHECK(error_key(j) == "schedule");

        j = base();
        j["initial_point"] = json::array({1, 2});
        CHECK(error_key(j) == "initial_point");

        j = base();
        j["precision"] = "quad";
        CHECK(error_key(j) == "precision");

        j = base();
        j["checks"] = {{"decrease_samples", 10}};
        CHECK(error_key(j) == "checks.decrease_samples");

        CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    }

    TEST_CASE("cross-constraints are validated on resolve") {
        auto j = base();
        j["schedule"] = {{"name", "directional"}};
        // The chain is not strongly convex, so h has no default.
        try {
            resolve(parse_config(j));
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "schedule.h");
        }
        j["schedule"]["h"] = 2.0;
        const auto r = resolve(parse_config(j));
        CHECK(*r.probe_base == 2.0);
        CHECK(std::get<DirectionalSchedule>(std::get<StpParams>(r.solver).schedule).L == 4.0);
        CHECK(r.precision == Precision::Extended);

        j = base();
        j["schedule"] = {{"name", "harmonic"}};
        try {
            resolve(parse_config(j));
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "schedule.alpha");
        }

        j = base();
        j["initial_point"] = {{"level", 1.0}};
        try {
            resolve(parse_config(j));
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(e.key() == "initial_point.level");
        }

        j = base();
        j["schedule"]["exponent"] = 1.5;
        CHECK_THROWS(resolve(parse_config(j)));
    }

    TEST_CASE("resolve fills in derived constants") {
        auto j = base();
        j["objective"] = {{"name", "sphere_quadratic"}, {"dim", 10}};
        j["initial_point"] = "ones";
        j["schedule"] = {{"name", "directional"}, {"h", nullptr}};
        const auto r = resolve(parse_config(j));
        const double q = 1 / (2 * M_PI * 10);
        CHECK(*r.probe_base == doctest::Approx(2 / std::sqrt(1 - q)).epsilon(1e-15));
        CHECK(r.initial_gap == 5.0);
        CHECK(r.initial_point == std::vector<double>(10, 1.0));

        j["objective"] = {{"name", "huber_chain"}, {"dim", 10}};
        j["initial_point"] = {{"level", 1.0}};
        j["schedule"] = {{"name", "harmonic"}, {"alpha", "auto"}};
        const auto h = resolve(parse_config(j));
        REQUIRE(h.harmonic);
        CHECK(h.initial_gap == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(h.harmonic->R == doctest::Approx(std::sqrt(10.0) * std::sqrt(3.0)).epsilon(1e-12));
        CHECK(h.harmonic->alpha == doctest::Approx(2 * h.harmonic->R / h.constants.mu_D).epsilon(1e-14));
        CHECK(std::get<HarmonicSchedule>(std::get<StpParams>(h.solver).schedule).alpha == h.harmonic->alpha);
        CHECK(h.precision == Precision::Double);
    }

    TEST_CASE("canonical serialization is stable") {
        const auto c = parse_config(base());
        const auto text = canonical_text(c);
        const auto again = parse_config_text(text);
        CHECK(canonical_text(again) == text);
        CHECK(config_digest(again) == config_digest(c));
        CHECK(config_digest(c).size() == 16);

        auto j = base();
        j["base_seed"] = 8;
        CHECK(config_digest(parse_config(j)) != config_digest(c));
    }

    TEST_CASE("round trip over random configs") {
        gen::for_all(80, 200, [](gen::Gen& g, std::size_t) {
            json j;
            j["name"] = "cfg" + std::to_string(g.integer(0, 999));
            const auto obj = g.pick<std::string>({"nesterov_chain", "sphere_quadratic", "huber_chain"});
            const std::size_t dim = g.integer(1, 50);
            j["objective"] = {{"name", obj}, {"dim", dim}};
            const auto solver = g.pick<std::string>({"stp", "rgf", "gld"});
            if (solver == "stp") {
                j["solver"] = "stp";
                const auto sched = g.pick<std::string>({"power", "harmonic", "directional"});
                if (sched == "power")
                    j["schedule"] = {{"name", "power"}, {"alpha", g.log_uniform(0.1, 10)}, {"exponent", g.uniform(0.3, 1)}};
                else if (sched == "harmonic")
                    j["schedule"] = {{"name", "harmonic"}, {"alpha", g.log_uniform(0.1, 10)}};
                else
                    j["schedule"] = {{"name", "directional"}, {"h", g.uniform(1.5, 3)}};
            } else if (solver == "rgf") {
                j["solver"] = {{"name", "rgf"}, {"mu_fd", g.log_uniform(1e-6, 1e-2)}, {"h_step", g.uniform(0.1, 1)}};
            } else {
                j["solver"] = {{"name", "gld"}, {"r_min", 1e-5}, {"r_max", g.log_uniform(2e-5, 1)}};
            }
            if (solver != "rgf") j["distribution"] = g.pick<std::string>({"unit_sphere", "scaled_gaussian"});
            if (g.uniform(0, 1) < 0.3) j["initial_point"] = g.gaussian(dim);
            j["trajectories"] = g.integer(1, 100);
            j["iterations"] = g.integer(1, 100000);
            j["base_seed"] = g.rng()();
            j["record_every"] = g.integer(1, 100);
            const auto c = parse_config(j);
            const auto text = canonical_text(c);
            REQUIRE(canonical_text(parse_config_text(text)) == text);
            REQUIRE(parse_config_text(text).base_seed == c.base_seed);
        });
    }

    TEST_CASE("load_config reports missing files") {
        testutil::TempDir dir("config");
        CHECK_THROWS_AS(load_config(dir / "missing.json"), FileError);
        testutil::spit(dir / "ok.json", base().dump());
        CHECK(load_config(dir / "ok.json").dim == 500);
    }

    TEST_CASE("shipped example configs parse and resolve") {
        for (const char* name : {"stp_nesterov", "rgf_nesterov", "gld_nesterov", "sphere_directional",
                                 "huber_harmonic"}) {
            CAPTURE(name);
            const auto path = std::filesystem::path(STP_SOURCE_DIR) / "configs" / (std::string(name) + ".json");
            CHECK_NOTHROW(resolve(load_config(path)));
        }
    }
}
