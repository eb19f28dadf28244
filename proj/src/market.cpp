#include "popmarket/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "popmarket/errors.hpp"

namespace popmarket {

MarketState init_market(const ModelParams& params, const QualitySource& source,
                        RandomStream& rng) {
    params.validate();
    const std::size_t n = static_cast<std::size_t>(params.n_items);

    MarketState state;
    state.qualities.resize(n);
    if (source.is_uniform()) {
        for (std::size_t i = 0; i < n; ++i) {
            state.qualities[i] = rng.next_unit();
        }
    } else {
        const auto& values = source.values();
        if (values.size() != n) {
            throw InvalidInputError("fixed qualities must have length n_items");
        }
        for (double v : values) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw InvalidInputError("fixed qualities must lie in [0, 1]");
            }
        }
        state.qualities = values;
    }

    state.quality_cdf.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += state.qualities[i];
        state.quality_cdf[i] = acc;
    }
    if (!(acc > 0.0)) {
        throw DegenerateQualityError("all qualities are zero; quality choice is undefined");
    }

    std::vector<std::int64_t> counts(n, 1);
    state.rank_index = RankIndex(counts, params.alpha, params.tie_rank_mode);
    state.t = 0;
    return state;
}

std::size_t select_by_quality(const MarketState& state, RandomStream& rng) {
    const double total = state.quality_cdf.back();
    const double u = rng.next_unit() * total;
    auto it = std::upper_bound(state.quality_cdf.begin(), state.quality_cdf.end(), u);
    if (it == state.quality_cdf.end()) {
        --it;  // u == total can only come from rounding; clamp to the last item
    }
    return static_cast<std::size_t>(it - state.quality_cdf.begin());
}

std::size_t select_by_popularity(const MarketState& state, RandomStream& rng) {
    return state.rank_index.sample(rng);
}

SelectionRecord step(MarketState& state, const ModelParams& params, RandomStream& rng) {
    SelectionRecord rec;
    rec.step = state.t;
    const bool popularity_arm = rng.bernoulli(params.beta);
    std::size_t item;
    if (popularity_arm) {
        rec.branch = SelectionBranch::popularity;
        item = select_by_popularity(state, rng);
    } else {
        rec.branch = SelectionBranch::quality;
        item = select_by_quality(state, rng);
    }
    rec.item = static_cast<std::uint32_t>(item);
    state.rank_index.increment(item);
    ++state.t;
    return rec;
}

RealizationResult run_realization(const ModelParams& params, std::int64_t t_steps,
                                  const TraceSchedule& trace, std::uint64_t seed,
                                  TauVariant tau_variant, const QualitySource& source) {
    params.validate();
    if (t_steps < 1) {
        throw InvalidInputError("t_steps must be >= 1");
    }

    RandomStream rng(seed);
    MarketState state = init_market(params, source, rng);

    RealizationResult result;
    result.qualities = state.qualities;
    if (trace.enabled()) {
        result.trace_mean_quality.reserve(trace.times.size());
    }

    std::size_t next_trace = 0;
    for (std::int64_t k = 0; k < t_steps; ++k) {
        step(state, params, rng);
        while (next_trace < trace.times.size() && trace.times[next_trace] == state.t) {
            result.trace_mean_quality.push_back(
                average_quality(state.popularity(), state.qualities));
            ++next_trace;
        }
    }

    result.popularity = state.popularity();
    result.mean_quality = average_quality(result.popularity, result.qualities);

    std::vector<double> popularity_real(result.popularity.begin(), result.popularity.end());
    try {
        result.tau = kendall_tau(popularity_real, result.qualities, tau_variant);
    } catch (const UndefinedCorrelationError&) {
        result.tau = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace popmarket
