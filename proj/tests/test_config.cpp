#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "ph/config.hpp"
#include "ph/errors.hpp"

using nlohmann::json;

namespace {

json full_config() {
    return json::parse(R"({
      "process": {
        "type": "blocked_chain",
        "density": {"dim": 2, "grid_m": 2, "weights": [2.0, 0.8, 0.6, 0.6]},
        "hidden": {"lazy_theta": 0.25}
      },
      "complex": {"kind": "rips", "max_dim": 2, "max_radius": 1.4},
      "queries": [{"q": 0, "r": 0.4, "s": 0.6}, {"q": 1, "r": 0.9, "s": 1.1}],
      "n_grid": [200, 400],
      "replications": 12,
      "master_seed": 99,
      "workers": 2,
      "budget": {"max_simplices": 100000},
      "mode": "compare_iid"
    })");
}

} // namespace

TEST_CASE("full experiment config parses") {
    const auto config = ph::parse_experiment_config(full_config());
    CHECK(config.queries.rects.size() == 2);
    CHECK(config.n_grid == std::vector<size_t>{200, 400});
    CHECK(config.replications == 12);
    CHECK(config.master_seed == 99);
    CHECK(config.workers == 2);
    CHECK(config.max_simplices == 100000);
    CHECK(config.mode == ph::ExperimentMode::compare_iid);
    CHECK(config.complex.kind == ph::ComplexKind::rips);
    CHECK(config.process.ambient_dim() == 2);
    CHECK(std::holds_alternative<ph::BlockedChainProcess>(config.process.process));
}

TEST_CASE("field paths in diagnostics") {
    json j = full_config();
    j["process"].erase("type");
    try {
        ph::parse_experiment_config(j);
        FAIL("expected config_error");
    } catch (const ph::config_error& err) {
        CHECK(err.field() == "process.type");
    }

    j = full_config();
    j["process"]["density"]["weights"] = {1.0, 1.0, 1.0, 2.0}; // mass sum != 1
    try {
        ph::parse_experiment_config(j);
        FAIL("expected config_error");
    } catch (const ph::config_error& err) {
        CHECK(err.field().find("blocks") != std::string::npos);
    }

    j = full_config();
    j["queries"][0]["r"] = 2.0; // r > s
    CHECK_THROWS_AS(ph::parse_experiment_config(j), ph::config_error);

    j = full_config();
    j["mode"] = "nonsense";
    CHECK_THROWS_AS(ph::parse_experiment_config(j), ph::config_error);

    j = full_config();
    j["n_grid"] = {400, 200};
    CHECK_THROWS_AS(ph::parse_experiment_config(j), ph::config_error);
}

TEST_CASE("process variants parse") {
    const json binomial = json::parse(R"({"type": "binomial", "dim": 3})");
    CHECK(ph::parse_process(binomial, "process").ambient_dim() == 3);

    const json density_chain = json::parse(R"({
      "type": "density_chain", "order": 1, "dim": 1,
      "joint": {"name": "sine_product", "amplitude": 0.5}
    })");
    const auto dc = ph::parse_process(density_chain, "process");
    CHECK(std::holds_alternative<ph::DensityChainProcess>(dc.process));

    const json lattice = json::parse(R"({
      "type": "lattice_field",
      "density": {"dim": 2, "grid_m": 2, "weights": [2.0, 0.8, 0.6, 0.6]},
      "lazy_theta": 0.2, "lambda": 0.5, "extent": [20, 20]
    })");
    const auto lf = ph::parse_process(lattice, "process");
    CHECK(std::holds_alternative<ph::LatticeFieldProcess>(lf.process));

    const json delay = json::parse(R"({
      "type": "delay_embedding",
      "density": {"dim": 1, "grid_m": 2, "weights": [1.5, 0.5]},
      "hidden": {"lazy_theta": 0.3},
      "lags": [1, 2]
    })");
    const auto de = ph::parse_process(delay, "process");
    CHECK(de.ambient_dim() == 3);

    const json unknown = json::parse(R"({"type": "brownian"})");
    CHECK_THROWS_AS(ph::parse_process(unknown, "process"), ph::config_error);

    const json bad_joint = json::parse(R"({
      "type": "density_chain", "order": 2, "dim": 1,
      "joint": {"name": "sine_product"}
    })");
    CHECK_THROWS_AS(ph::parse_process(bad_joint, "process"), ph::config_error);
}

TEST_CASE("concentration block parses") {
    json j = full_config();
    j["mode"] = "concentration";
    j["concentration"] = {{"a", 0.9},        {"f_star", 1.0}, {"gamma_inf", 2.0},
                          {"t_grid", {1.0, 2.0}}, {"n", 300},      {"query", {{"q", 0}, {"r", 0.5}, {"s", 0.6}}}};
    const auto config = ph::parse_experiment_config(j);
    CHECK(config.concentration.t_grid.size() == 2);
    CHECK(config.concentration_n == 300);
    CHECK(config.concentration_query.s == 0.6);

    j["concentration"]["a"] = 0.5; // needs a > 1/2
    CHECK_THROWS_AS(ph::parse_experiment_config(j), ph::config_error);
}

TEST_CASE("exploratory scaling regimes parse") {
    json j = full_config();
    j["regime"] = {{"kind", "supercritical"}, {"alpha", 0.5}};
    const auto config = ph::parse_experiment_config(j);
    REQUIRE(config.regime.has_value());
    CHECK(config.regime->kind == ph::ScalingRegime::Kind::supercritical);

    j["regime"] = {{"kind", "subcritical"}, {"beta", 0.3}}; // beta <= 1/p
    CHECK_THROWS_AS(ph::parse_experiment_config(j), ph::config_error);

    j["regime"] = {{"kind", "warp"}};
    CHECK_THROWS_AS(ph::parse_experiment_config(j), ph::config_error);
}

TEST_CASE("config hash is stable") {
    CHECK(ph::fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(ph::fnv1a64("a") != ph::fnv1a64("b"));
}
