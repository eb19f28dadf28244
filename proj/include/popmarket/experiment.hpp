#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "popmarket/errors.hpp"
#include "popmarket/market.hpp"
#include "popmarket/metrics.hpp"
#include "popmarket/params.hpp"

namespace popmarket {

// Trace request as configuration: how many sample times, spaced how.
// Expanded to a concrete TraceSchedule per (t_steps) when a sweep runs.
struct TraceSpec {
    int n_points = 20;
    TraceScale scale = TraceScale::log;

    bool operator==(const TraceSpec&) const = default;
};

// Full description of a sweep: the (alpha, beta) grid, market size, horizon,
// replication count, seeding, and model options. A GridResult is a pure
// function of this struct.
struct SweepConfig {
    std::vector<double> alphas = {1.0};
    std::vector<double> betas = {0.4};
    int n_items = 100;
    std::int64_t t_steps = 100000;
    int n_runs = 50;
    std::uint64_t master_seed = 12345;
    TieRankMode tie_rank_mode = TieRankMode::max_rank;
    TauVariant tau_variant = TauVariant::tau_b;
    std::optional<TraceSpec> trace;

    // Throws ConfigError naming the offending key.
    void validate() const;

    // Model parameters for one grid cell.
    ModelParams params_at(std::size_t alpha_index, std::size_t beta_index) const;

    bool operator==(const SweepConfig&) const = default;
};

// Aggregated quality trace for one cell: mean and standard error across runs
// at each scheduled time.
struct CellTrace {
    std::vector<std::int64_t> times;
    std::vector<double> mean_q;
    std::vector<double> stderr_q;
};

struct CellResult {
    CellSummary summary;
    std::optional<CellTrace> trace;
};

// All cell summaries for a sweep, alpha-major: cell (ai, bi) lives at index
// ai * betas.size() + bi.
struct GridResult {
    SweepConfig config;
    std::vector<CellSummary> cells;
    std::vector<CellTrace> traces;  // empty when tracing is disabled

    const CellSummary& cell(std::size_t alpha_index, std::size_t beta_index) const;
    bool has_traces() const noexcept { return !traces.empty(); }
    const CellTrace& trace_at(std::size_t alpha_index, std::size_t beta_index) const;
};

// A sweep failed partway: carries the first error and how many cells finished.
class GridAbortedError : public Error {
public:
    GridAbortedError(const std::string& message, std::size_t completed_cells)
        : Error(message), completed_cells_(completed_cells) {}
    std::size_t completed_cells() const noexcept { return completed_cells_; }

private:
    std::size_t completed_cells_;
};

// Per-run seed from (master_seed, alpha_index, beta_index, run_index):
// a chained splitmix64 finalizer over the four inputs. Deterministic and
// platform-independent; distinct indices give distinct seeds in practice.
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t alpha_index,
                          std::size_t beta_index, std::size_t run_index);

// Runs one grid cell serially: n_runs realizations with fresh quality draws,
// each seeded by derive_seed, aggregated into a summary (and a trace aggregate
// when the config requests one).
CellResult run_cell(const SweepConfig& config, std::size_t alpha_index,
                    std::size_t beta_index);

// Runs every cell of the grid on `workers` threads (workers <= 0 means use
// hardware concurrency). The result is identical for any worker count. On the
// first cell failure the sweep aborts with GridAbortedError.
GridResult run_grid(const SweepConfig& config, int workers = 1);

// Position and value of the maximal mean_q along one alpha row; ties break
// toward smaller beta.
std::pair<double, double> argmax_beta(const GridResult& grid, std::size_t alpha_index);

}  // namespace popmarket
