#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "popmarket/metrics.hpp"
#include "popmarket/params.hpp"
#include "popmarket/rank_index.hpp"
#include "popmarket/rng.hpp"

namespace popmarket {

// Where a market's qualities come from: fresh uniform draws on [0,1], or a
// fixed vector supplied by the caller (used by tests and replays).
class QualitySource {
public:
    static QualitySource uniform_draw() { return QualitySource{}; }
    static QualitySource fixed(std::vector<double> values) {
        QualitySource s;
        s.values_ = std::move(values);
        return s;
    }

    bool is_uniform() const noexcept { return !values_.has_value(); }
    const std::vector<double>& values() const { return *values_; }

private:
    std::optional<std::vector<double>> values_;
};

enum class SelectionBranch { popularity, quality };

// One selection event: which item, via which mixture arm, at which step.
struct SelectionRecord {
    std::int64_t step = 0;  // 0-based index of the selection
    std::uint32_t item = 0;
    SelectionBranch branch = SelectionBranch::quality;
};

// Live state of one market realization.
//
// Invariants: every popularity count is >= 1, sum(popularity) == n_items + t,
// and the rank index always agrees with the counts (it owns them).
struct MarketState {
    std::vector<double> qualities;
    std::vector<double> quality_cdf;  // prefix sums of qualities
    RankIndex rank_index;
    std::int64_t t = 0;  // selections performed so far

    const std::vector<std::int64_t>& popularity() const { return rank_index.counts(); }
};

// Builds a fresh market: qualities drawn (or copied), every count at 1, rank
// index built. With all items tied the popularity rule starts out uniform.
// Consumes n_items unit draws from rng when the source is uniform, none
// otherwise.
MarketState init_market(const ModelParams& params, const QualitySource& source,
                        RandomStream& rng);

// Draws an item with probability q_i / sum(q). One unit draw; state untouched.
std::size_t select_by_quality(const MarketState& state, RandomStream& rng);

// Draws an item with probability rank^-alpha / sum(rank^-alpha). State untouched.
std::size_t select_by_popularity(const MarketState& state, RandomStream& rng);

// One selection: a Bernoulli(beta) coin picks the popularity or quality arm,
// the chosen arm draws an item, the item's count and the ranking update.
// Draw order is fixed: coin first, then the arm's own draws.
SelectionRecord step(MarketState& state, const ModelParams& params, RandomStream& rng);

// Outcome of one full realization.
struct RealizationResult {
    std::vector<std::int64_t> popularity;
    std::vector<double> qualities;
    double mean_quality = 0.0;
    double tau = 0.0;  // NaN when the correlation is undefined (all-tied input)
    std::vector<double> trace_mean_quality;  // q-bar at each scheduled time
};

// Runs t_steps selections from a fresh market. Fully deterministic in
// (params, t_steps, trace, seed, source); trace recording consumes no draws.
RealizationResult run_realization(const ModelParams& params, std::int64_t t_steps,
                                  const TraceSchedule& trace, std::uint64_t seed,
                                  TauVariant tau_variant = TauVariant::tau_b,
                                  const QualitySource& source = QualitySource::uniform_draw());

}  // namespace popmarket
