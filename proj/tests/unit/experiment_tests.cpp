#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "popmarket/errors.hpp"
#include "popmarket/experiment.hpp"

using namespace popmarket;

namespace {

SweepConfig small_config() {
    SweepConfig config;
    config.alphas = {0.5, 1.5};
    config.betas = {0.2, 0.8};
    config.n_items = 40;
    config.t_steps = 1500;
    config.n_runs = 6;
    config.master_seed = 777;
    return config;
}

bool same_summary(const CellSummary& a, const CellSummary& b) {
    return a.alpha == b.alpha && a.beta == b.beta && a.n_runs == b.n_runs &&
           a.mean_q == b.mean_q && a.stderr_q == b.stderr_q &&
           a.mean_tau == b.mean_tau && a.stderr_tau == b.stderr_tau;
}

GridResult fake_grid(std::vector<double> betas, std::vector<double> mean_qs) {
    GridResult grid;
    grid.config.alphas = {1.0};
    grid.config.betas = std::move(betas);
    for (double q : mean_qs) {
        CellSummary cell;
        cell.alpha = 1.0;
        cell.mean_q = q;
        grid.cells.push_back(cell);
    }
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        grid.cells[i].beta = grid.config.betas[i];
    }
    return grid;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config validation names the offending key") {
    auto expect_key = [](SweepConfig config, const std::string& key) {
        try {
            config.validate();
            FAIL_CHECK("expected ConfigError for key " << key);
        } catch (const ConfigError& e) {
            CHECK(e.key() == key);
        }
    };

    SweepConfig c = small_config();
    c.alphas.clear();
    expect_key(c, "alphas");

    c = small_config();
    c.alphas = {-0.5};
    expect_key(c, "alphas");

    c = small_config();
    c.betas = {0.2, 1.5};
    expect_key(c, "betas");

    c = small_config();
    c.n_items = 1;
    expect_key(c, "n_items");

    c = small_config();
    c.t_steps = 0;
    expect_key(c, "t_steps");

    c = small_config();
    c.n_runs = 0;
    expect_key(c, "n_runs");

    c = small_config();
    c.trace = TraceSpec{0, TraceScale::log};
    expect_key(c, "trace.n_points");

    c = small_config();
    c.trace = TraceSpec{2000, TraceScale::log};  // more points than steps
    expect_key(c, "trace.n_points");

    small_config().validate();  // sanity: the base config is valid
}

TEST_CASE("derive_seed is deterministic and index-sensitive") {
    CHECK(derive_seed(12345, 1, 2, 3) == derive_seed(12345, 1, 2, 3));
    CHECK(derive_seed(12345, 0, 0, 0) != derive_seed(12345, 0, 0, 1));
    CHECK(derive_seed(12345, 0, 0, 0) != derive_seed(12345, 0, 1, 0));
    CHECK(derive_seed(12345, 0, 0, 0) != derive_seed(12345, 1, 0, 0));
    CHECK(derive_seed(12345, 0, 0, 0) != derive_seed(12346, 0, 0, 0));
}

TEST_CASE("derive_seed collision scan over a 100x100x100 grid") {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(1000000);
    for (std::size_t a = 0; a < 100; ++a) {
        for (std::size_t b = 0; b < 100; ++b) {
            for (std::size_t r = 0; r < 100; ++r) {
                seeds.push_back(derive_seed(987654321, a, b, r));
            }
        }
    }
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("run_cell validates indices and echoes the cell") {
    const SweepConfig config = small_config();
    CHECK_THROWS_AS(run_cell(config, 2, 0), InvalidInputError);
    CHECK_THROWS_AS(run_cell(config, 0, 2), InvalidInputError);

    const CellResult cell = run_cell(config, 1, 0);
    CHECK(cell.summary.alpha == 1.5);
    CHECK(cell.summary.beta == 0.2);
    CHECK(cell.summary.n_runs == 6);
    CHECK(cell.summary.stderr_q >= 0.0);
    CHECK_FALSE(cell.trace.has_value());
}

TEST_CASE("run_cell equals hand-rolled realizations over derived seeds") {
    const SweepConfig config = small_config();
    const std::size_t ai = 0, bi = 1;
    const CellResult cell = run_cell(config, ai, bi);

    std::vector<RealizationResult> runs;
    const ModelParams params = config.params_at(ai, bi);
    for (int r = 0; r < config.n_runs; ++r) {
        runs.push_back(run_realization(params, config.t_steps, TraceSchedule::none(),
                                       derive_seed(config.master_seed, ai, bi,
                                                   static_cast<std::size_t>(r)),
                                       config.tau_variant));
    }
    const CellSummary expected = summarize_runs(runs, params.alpha, params.beta);
    CHECK(same_summary(cell.summary, expected));
}

TEST_CASE("run_cell trace aggregate lines up with the final summary") {
    SweepConfig config = small_config();
    config.trace = TraceSpec{5, TraceScale::linear};
    const CellResult cell = run_cell(config, 0, 0);
    REQUIRE(cell.trace.has_value());
    const auto expected_times = trace_schedule(config.t_steps, 5, TraceScale::linear).times;
    CHECK(cell.trace->times == expected_times);
    REQUIRE(cell.trace->mean_q.size() == expected_times.size());
    // The last trace point is t = T, so it must reproduce the summary exactly.
    CHECK(cell.trace->mean_q.back() == cell.summary.mean_q);
    CHECK(cell.trace->stderr_q.back() == cell.summary.stderr_q);
}

TEST_CASE("run_grid degenerate 1x1 equals run_cell") {
    SweepConfig config = small_config();
    config.alphas = {1.0};
    config.betas = {0.4};
    const GridResult grid = run_grid(config, 1);
    REQUIRE(grid.cells.size() == 1);
    CHECK(same_summary(grid.cell(0, 0), run_cell(config, 0, 0).summary));
}

TEST_CASE("run_grid cells equal standalone run_cell at the same indices") {
    const SweepConfig config = small_config();
    const GridResult grid = run_grid(config, 2);
    for (std::size_t ai = 0; ai < 2; ++ai) {
        for (std::size_t bi = 0; bi < 2; ++bi) {
            CHECK(same_summary(grid.cell(ai, bi), run_cell(config, ai, bi).summary));
        }
    }
}

TEST_CASE("run_grid is identical across worker counts") {
    SweepConfig config = small_config();
    config.trace = TraceSpec{4, TraceScale::log};
    const GridResult serial = run_grid(config, 1);
    const GridResult parallel = run_grid(config, 4);
    const GridResult oversubscribed = run_grid(config, 16);
    REQUIRE(serial.cells.size() == parallel.cells.size());
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        CHECK(same_summary(serial.cells[i], parallel.cells[i]));
        CHECK(same_summary(serial.cells[i], oversubscribed.cells[i]));
        CHECK(serial.traces[i].mean_q == parallel.traces[i].mean_q);
        CHECK(serial.traces[i].stderr_q == parallel.traces[i].stderr_q);
        CHECK(serial.traces[i].times == parallel.traces[i].times);
    }
}

TEST_CASE("run_grid emits one cell per grid point in config order") {
    SweepConfig config = small_config();
    config.alphas = {0.0, 0.5, 1.0, 2.0, 3.0};
    config.betas = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    config.n_items = 20;
    config.t_steps = 60;
    config.n_runs = 2;
    const GridResult grid = run_grid(config, 3);
    REQUIRE(grid.cells.size() == 55);
    for (std::size_t ai = 0; ai < config.alphas.size(); ++ai) {
        for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
            CHECK(grid.cell(ai, bi).alpha == config.alphas[ai]);
            CHECK(grid.cell(ai, bi).beta == config.betas[bi]);
        }
    }
    CHECK_THROWS_AS(grid.cell(5, 0), InvalidInputError);
    CHECK_THROWS_AS(grid.trace_at(0, 0), NoTraceError);
}

TEST_CASE("argmax_beta picks the max and breaks ties toward smaller beta") {
    const GridResult direct = fake_grid({0.0, 0.2, 0.4}, {0.66, 0.70, 0.65});
    const auto [beta_hat, q_max] = argmax_beta(direct, 0);
    CHECK(beta_hat == 0.2);
    CHECK(q_max == 0.70);

    const GridResult tied = fake_grid({0.0, 0.3, 0.6}, {0.5, 0.5, 0.5});
    CHECK(argmax_beta(tied, 0).first == 0.0);

    CHECK_THROWS_AS(argmax_beta(direct, 1), InvalidInputError);
}

TEST_CASE("argmax_beta reads only the requested row") {
    GridResult grid;
    grid.config.alphas = {1.0, 2.0};
    grid.config.betas = {0.0, 0.5};
    auto push = [&](double alpha, double beta, double q) {
        CellSummary cell;
        cell.alpha = alpha;
        cell.beta = beta;
        cell.mean_q = q;
        grid.cells.push_back(cell);
    };
    push(1.0, 0.0, 0.60);
    push(1.0, 0.5, 0.70);
    push(2.0, 0.0, 0.90);
    push(2.0, 0.5, 0.40);
    CHECK(argmax_beta(grid, 0).first == 0.5);
    CHECK(argmax_beta(grid, 1).first == 0.0);
    CHECK(argmax_beta(grid, 1).second == 0.90);
}

}  // TEST_SUITE
