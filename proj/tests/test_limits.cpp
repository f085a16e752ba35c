#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ph/errors.hpp"
#include "ph/limits.hpp"

using ph::ComplexSpec;
using ph::EstimateOptions;
using ph::ProcessSpec;
using ph::Rectangle;
using ph::RectangleGrid;

namespace {

ProcessSpec uniform_process(size_t p) {
    ProcessSpec spec;
    spec.process = ph::BinomialProcess{p, std::nullopt};
    spec.tag = "binomial";
    return spec;
}

ProcessSpec quadrant_chain(double theta) {
    const auto density = ph::BlockedDensity::regular_grid(2, 2, {2.0, 0.8, 0.6, 0.6});
    ProcessSpec spec;
    spec.process = ph::BlockedChainProcess{
        density, ph::HiddenChainSpec::lazy_mixture(density.block_masses(), theta)};
    spec.tag = "blocked_chain";
    return spec;
}

} // namespace

TEST_CASE("degenerate query r=s=0 on distinct points estimates exactly 1") {
    RectangleGrid grid;
    grid.rects = {{0, 0.0, 0.0}};
    const std::vector<size_t> ns{50, 100};
    const auto estimates = ph::estimate_limit(uniform_process(2), grid, ns, 10,
                                              {ph::ComplexKind::rips, 1, 0.5}, 7, {});
    REQUIRE(estimates.size() == 1);
    for (size_t ix = 0; ix < ns.size(); ++ix) {
        CHECK(estimates[0].mean[ix] == 1.0);
        CHECK(estimates[0].se[ix] == 0.0);
    }
}

TEST_CASE("1-d i.i.d. uniform, q=0, r=s: the exponential-gap law") {
    // On the line, n^{-1} beta_0^{r,r}(K(n X_n)) -> exp(-r): a component ends
    // at each spacing exceeding r, and rescaled spacings are Exp(1) in the
    // limit. Modest n and R here; the acceptance suite runs the full check.
    RectangleGrid grid;
    grid.rects = {{0, 0.5, 0.5}, {0, 1.0, 1.0}};
    const std::vector<size_t> ns{800};
    const auto estimates = ph::estimate_limit(uniform_process(1), grid, ns, 40,
                                              {ph::ComplexKind::rips, 1, 2.5}, 11, {});
    for (const auto& est : estimates) {
        const double oracle_value = std::exp(-est.rect.r);
        CHECK(std::fabs(est.mean[0] - oracle_value) <= 4.0 * est.se[0]);
    }
}

TEST_CASE("independence-rows chain is statistically identical to its binomial twin") {
    RectangleGrid grid;
    grid.rects = {{0, 0.4, 0.6}, {1, 0.8, 1.0}};
    const std::vector<size_t> ns{400};
    const ComplexSpec complex{ph::ComplexKind::rips, 2, 1.2};
    const auto chain = quadrant_chain(0.0);
    const auto a = ph::estimate_limit(chain, grid, ns, 24, complex, 21, {});
    const auto b = ph::estimate_limit(chain.matched_binomial(), grid, ns, 24, complex, 22, {});
    const auto rows = ph::compare_estimates(a, b);
    for (const auto& row : rows) {
        CHECK(row.status != ph::AgreementStatus::fail);
        CHECK(row.z < 4.0);
    }
}

TEST_CASE("estimates are deterministic and independent of the worker count") {
    RectangleGrid grid;
    grid.rects = {{0, 0.5, 0.7}, {1, 0.9, 1.1}};
    const std::vector<size_t> ns{150, 300};
    const ComplexSpec complex{ph::ComplexKind::rips, 2, 1.2};
    EstimateOptions serial;
    serial.workers = 1;
    EstimateOptions parallel;
    parallel.workers = 4;
    const auto chain = quadrant_chain(0.25);
    const auto a = ph::estimate_limit(chain, grid, ns, 12, complex, 33, serial);
    const auto b = ph::estimate_limit(chain, grid, ns, 12, complex, 33, parallel);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mean == b[i].mean); // bit identical
        CHECK(a[i].se == b[i].se);
    }
}

TEST_CASE("budget violations name the offending replication") {
    RectangleGrid grid;
    grid.rects = {{0, 0.5, 0.5}};
    const std::vector<size_t> ns{200};
    EstimateOptions options;
    options.max_simplices = 100;
    try {
        ph::estimate_limit(uniform_process(2), grid, ns, 10, {ph::ComplexKind::rips, 2, 1.0}, 3,
                           options);
        FAIL("expected budget_error");
    } catch (const ph::budget_error& err) {
        CHECK(std::string(err.what()).find("n=200") != std::string::npos);
        CHECK(std::string(err.what()).find("replication=") != std::string::npos);
    }
}

TEST_CASE("slln trajectory: constant for the degenerate query, stable for uniform") {
    const Rectangle degenerate{0, 0.0, 0.0};
    const std::vector<size_t> ns{100, 200, 400};
    const auto flat = ph::slln_check(uniform_process(2), degenerate, ns,
                                     {ph::ComplexKind::rips, 1, 0.4}, 3, {});
    for (double v : flat.values) CHECK(v == 1.0);
    CHECK(flat.diagnostic == 0.0);

    const Rectangle query{0, 0.6, 0.6};
    const std::vector<size_t> long_ns{500, 1000, 2000};
    const auto traj = ph::slln_check(uniform_process(2), query, long_ns,
                                     {ph::ComplexKind::rips, 1, 0.8}, 5, {});
    // counting bound: n^{-1} beta_0 <= 1
    for (double v : traj.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(traj.diagnostic <= 0.05); // relative spread over the last 3 points
}

TEST_CASE("vague convergence table") {
    RectangleGrid empty;
    const std::vector<size_t> ns{100, 200};
    const auto none = ph::vague_convergence_check(uniform_process(2), empty, ns, 10,
                                                  {ph::ComplexKind::rips, 2, 1.0}, 5, {});
    CHECK(none.empty());

    // s beyond max_radius counts only essential classes; for q=1 far field
    // that is 0 and the flag is trivially satisfied.
    RectangleGrid far;
    far.rects = {{1, 0.2, 99.0}};
    const auto rows = ph::vague_convergence_check(uniform_process(2), far, ns, 10,
                                                  {ph::ComplexKind::rips, 2, 1.0}, 5, {});
    REQUIRE(rows.size() == 1);
    for (double m : rows[0].mean) CHECK(m == 0.0);
    CHECK(rows[0].cauchy_within_3se);
}

TEST_CASE("geometric lemma suite: vacuous, standard, and oversized runs") {
    const auto vacuous = ph::geometric_lemma_suite(10, 0, 1);
    CHECK(vacuous.trials == 0);
    CHECK(vacuous.violations == 0);

    const auto report = ph::geometric_lemma_suite(9, 60, 12345);
    CHECK(report.trials == 60);
    CHECK(report.violations == 0);

    CHECK_THROWS(ph::geometric_lemma_suite(13, 10, 1));
}

TEST_CASE("concentration suite: no violations, reports vacuous rows and sd decay") {
    const Rectangle query{0, 0.6, 0.8};
    ph::ConcentrationParams params;
    params.a = 0.9;
    params.f_star = 1.0;
    params.gamma_inf = 1.0;
    params.t_grid = {0.5, 1.0, 2.0};
    const auto report = ph::concentration_suite(uniform_process(2), query, 150, 1000, 17,
                                                {ph::ComplexKind::rips, 2, 1.0}, params, {});
    REQUIRE(report.rows.size() == 3);
    CHECK(report.violation_count == 0);
    for (const auto& row : report.rows) {
        CHECK(row.threshold == doctest::Approx(std::pow(150.0, 0.9) * row.t));
        if (!row.trivial) CHECK(row.empirical_tail <= row.bound);
    }
    CHECK(report.sd_decay_ratio > 0.0);
    CHECK(report.sd_decay_ratio < 2.0);
}

TEST_CASE("query validation") {
    RectangleGrid bad;
    bad.rects = {{0, 0.7, 0.4}};
    CHECK_THROWS_AS(bad.validate(), ph::config_error);

    RectangleGrid high_q;
    high_q.rects = {{2, 0.1, 0.2}};
    const std::vector<size_t> ns{50};
    // q=2 needs max_dim >= 3 for deaths to be visible
    CHECK_THROWS_AS(ph::estimate_limit(uniform_process(2), high_q, ns, 10,
                                       {ph::ComplexKind::rips, 2, 0.5}, 1, {}),
                    ph::config_error);
}
