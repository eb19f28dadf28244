#include "popmarket/experiment.hpp"

#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "popmarket/rng.hpp"

namespace popmarket {

namespace {

bool finite_in_range(double v, double lo, double hi) {
    return std::isfinite(v) && v >= lo && v <= hi;
}

}  // namespace

void SweepConfig::validate() const {
    if (alphas.empty()) {
        throw ConfigError("alphas", "must be non-empty");
    }
    for (double a : alphas) {
        if (!std::isfinite(a) || a < 0.0) {
            throw ConfigError("alphas", "every value must be finite and >= 0");
        }
    }
    if (betas.empty()) {
        throw ConfigError("betas", "must be non-empty");
    }
    for (double b : betas) {
        if (!finite_in_range(b, 0.0, 1.0)) {
            throw ConfigError("betas", "every value must lie in [0, 1]");
        }
    }
    if (n_items < 2) {
        throw ConfigError("n_items", "must be >= 2");
    }
    if (t_steps < 1) {
        throw ConfigError("t_steps", "must be >= 1");
    }
    if (n_runs < 1) {
        throw ConfigError("n_runs", "must be >= 1");
    }
    if (trace) {
        if (trace->n_points < 1) {
            throw ConfigError("trace.n_points", "must be >= 1");
        }
        if (trace->n_points > t_steps) {
            throw ConfigError("trace.n_points", "must not exceed t_steps");
        }
    }
}

ModelParams SweepConfig::params_at(std::size_t alpha_index, std::size_t beta_index) const {
    ModelParams p;
    p.alpha = alphas.at(alpha_index);
    p.beta = betas.at(beta_index);
    p.n_items = n_items;
    p.tie_rank_mode = tie_rank_mode;
    return p;
}

const CellSummary& GridResult::cell(std::size_t alpha_index, std::size_t beta_index) const {
    if (alpha_index >= config.alphas.size() || beta_index >= config.betas.size()) {
        throw InvalidInputError("grid cell index out of range");
    }
    return cells[alpha_index * config.betas.size() + beta_index];
}

const CellTrace& GridResult::trace_at(std::size_t alpha_index, std::size_t beta_index) const {
    if (traces.empty()) {
        throw NoTraceError("tracing was not enabled for this sweep");
    }
    if (alpha_index >= config.alphas.size() || beta_index >= config.betas.size()) {
        throw InvalidInputError("grid cell index out of range");
    }
    return traces[alpha_index * config.betas.size() + beta_index];
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t alpha_index,
                          std::size_t beta_index, std::size_t run_index) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ static_cast<std::uint64_t>(alpha_index));
    s = splitmix64(s ^ static_cast<std::uint64_t>(beta_index));
    s = splitmix64(s ^ static_cast<std::uint64_t>(run_index));
    return s;
}

namespace {

// Aggregates per-run traces pointwise into mean and standard error.
CellTrace aggregate_trace(const TraceSchedule& schedule,
                          const std::vector<RealizationResult>& runs) {
    CellTrace trace;
    trace.times = schedule.times;
    const std::size_t n_points = schedule.times.size();
    trace.mean_q.resize(n_points);
    trace.stderr_q.resize(n_points);
    std::vector<double> at_time(runs.size());
    for (std::size_t k = 0; k < n_points; ++k) {
        for (std::size_t r = 0; r < runs.size(); ++r) {
            at_time[r] = runs[r].trace_mean_quality[k];
        }
        auto [mean, se] = mean_and_stderr(at_time);
        trace.mean_q[k] = mean;
        trace.stderr_q[k] = se;
    }
    return trace;
}

}  // namespace

CellResult run_cell(const SweepConfig& config, std::size_t alpha_index,
                    std::size_t beta_index) {
    config.validate();
    if (alpha_index >= config.alphas.size() || beta_index >= config.betas.size()) {
        throw InvalidInputError("grid cell index out of range");
    }

    const ModelParams params = config.params_at(alpha_index, beta_index);
    TraceSchedule schedule = TraceSchedule::none();
    if (config.trace) {
        schedule = trace_schedule(config.t_steps, config.trace->n_points, config.trace->scale);
    }

    std::vector<RealizationResult> runs;
    runs.reserve(static_cast<std::size_t>(config.n_runs));
    for (int r = 0; r < config.n_runs; ++r) {
        const std::uint64_t seed = derive_seed(config.master_seed, alpha_index, beta_index,
                                               static_cast<std::size_t>(r));
        runs.push_back(run_realization(params, config.t_steps, schedule, seed,
                                       config.tau_variant));
    }

    CellResult result;
    result.summary = summarize_runs(runs, params.alpha, params.beta);
    if (config.trace) {
        result.trace = aggregate_trace(schedule, runs);
    }
    return result;
}

GridResult run_grid(const SweepConfig& config, int workers) {
    config.validate();

    const std::size_t na = config.alphas.size();
    const std::size_t nb = config.betas.size();
    const std::size_t n_cells = na * nb;

    std::size_t n_workers = workers <= 0
        ? std::max(1u, std::thread::hardware_concurrency())
        : static_cast<std::size_t>(workers);
    n_workers = std::min(n_workers, n_cells);

    std::vector<std::optional<CellResult>> slots(n_cells);
    std::vector<std::string> errors(n_cells);
    std::atomic<std::size_t> next_task{0};
    std::atomic<bool> abort{false};

    auto worker_loop = [&] {
        while (!abort.load(std::memory_order_relaxed)) {
            const std::size_t task = next_task.fetch_add(1, std::memory_order_relaxed);
            if (task >= n_cells) {
                return;
            }
            const std::size_t ai = task / nb;
            const std::size_t bi = task % nb;
            try {
                slots[task] = run_cell(config, ai, bi);
            } catch (const std::exception& e) {
                errors[task] = e.what();
                abort.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    if (n_workers <= 1) {
        worker_loop();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker_loop);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    std::size_t completed = 0;
    for (const auto& slot : slots) {
        if (slot) {
            ++completed;
        }
    }
    for (std::size_t task = 0; task < n_cells; ++task) {
        if (!errors[task].empty()) {
            throw GridAbortedError("sweep aborted: " + errors[task] + " (" +
                                       std::to_string(completed) + " of " +
                                       std::to_string(n_cells) + " cells completed)",
                                   completed);
        }
    }

    GridResult grid;
    grid.config = config;
    grid.cells.reserve(n_cells);
    if (config.trace) {
        grid.traces.reserve(n_cells);
    }
    for (std::size_t task = 0; task < n_cells; ++task) {
        CellResult& cell = *slots[task];
        grid.cells.push_back(cell.summary);
        if (config.trace) {
            grid.traces.push_back(std::move(*cell.trace));
        }
    }
    return grid;
}

std::pair<double, double> argmax_beta(const GridResult& grid, std::size_t alpha_index) {
    if (alpha_index >= grid.config.alphas.size()) {
        throw InvalidInputError("alpha_index out of range");
    }
    const std::size_t nb = grid.config.betas.size();
    std::size_t best = 0;
    for (std::size_t bi = 1; bi < nb; ++bi) {
        if (grid.cell(alpha_index, bi).mean_q > grid.cell(alpha_index, best).mean_q) {
            best = bi;
        }
    }
    return {grid.config.betas[best], grid.cell(alpha_index, best).mean_q};
}

}  // namespace popmarket
