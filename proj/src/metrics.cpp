#include "popmarket/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "popmarket/market.hpp"

namespace popmarket {

double average_quality(std::span<const std::int64_t> popularity,
                       std::span<const double> quality) {
    if (popularity.size() != quality.size())
        throw InvalidInputError("popularity and quality must have equal length");
    if (popularity.empty())
        throw InvalidInputError("popularity and quality must be non-empty");
    double num = 0.0;
    std::int64_t den = 0;
    for (std::size_t i = 0; i < popularity.size(); ++i) {
        if (popularity[i] < 0) throw InvalidInputError("popularity counts must be >= 0");
        num += static_cast<double>(popularity[i]) * quality[i];
        den += popularity[i];
    }
    if (den == 0) throw InvalidInputError("total popularity must be > 0");
    return num / static_cast<double>(den);
}

double kendall_tau(std::span<const double> x, std::span<const double> y,
                   TauVariant variant) {
    if (x.size() != y.size())
        throw InvalidInputError("kendall_tau inputs must have equal length");
    const std::size_t n = x.size();
    if (n < 2) throw InvalidInputError("kendall_tau needs at least 2 observations");

    std::int64_t concordant = 0;
    std::int64_t discordant = 0;
    std::int64_t ties_x = 0;
    std::int64_t ties_y = 0;
    std::int64_t ties_both = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool tx = x[i] == x[j];
            const bool ty = y[i] == y[j];
            if (tx && ty)
                ++ties_both;
            else if (tx)
                ++ties_x;
            else if (ty)
                ++ties_y;
            else if ((x[i] < x[j]) == (y[i] < y[j]))
                ++concordant;
            else
                ++discordant;
        }
    }
    const auto n0 = static_cast<std::int64_t>(n) * (static_cast<std::int64_t>(n) - 1) / 2;
    const std::int64_t s = concordant - discordant;
    if (variant == TauVariant::tau_a) return static_cast<double>(s) / static_cast<double>(n0);
    const std::int64_t dx = n0 - (ties_x + ties_both);
    const std::int64_t dy = n0 - (ties_y + ties_both);
    if (dx == 0 || dy == 0)
        throw UndefinedCorrelationError("tau-b undefined: one input is completely tied");
    return static_cast<double>(s) /
           std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
}

TraceSchedule trace_schedule(std::int64_t t_steps, int n_points, TraceScale scale) {
    if (t_steps < 1) throw InvalidInputError("t_steps must be >= 1");
    if (n_points < 1 || static_cast<std::int64_t>(n_points) > t_steps)
        throw InvalidInputError("n_points must lie in [1, t_steps]");

    TraceSchedule sched;
    sched.scale = scale;
    std::vector<std::int64_t>& times = sched.times;
    times.reserve(static_cast<std::size_t>(n_points));
    if (scale == TraceScale::linear) {
        for (int k = 1; k <= n_points; ++k) {
            const double t = static_cast<double>(k) * static_cast<double>(t_steps) /
                             static_cast<double>(n_points);
            times.push_back(std::max<std::int64_t>(1, std::llround(t)));
        }
    } else {
        const std::int64_t lo = std::min(t_steps, std::max<std::int64_t>(10, t_steps / 10000));
        if (n_points == 1) {
            times.push_back(t_steps);
        } else {
            const double ratio = static_cast<double>(t_steps) / static_cast<double>(lo);
            for (int k = 0; k < n_points; ++k) {
                const double f = static_cast<double>(k) / static_cast<double>(n_points - 1);
                const double t = static_cast<double>(lo) * std::pow(ratio, f);
                times.push_back(std::clamp<std::int64_t>(std::llround(t), 1, t_steps));
            }
        }
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (times.back() != t_steps) times.push_back(t_steps);
    return sched;
}

std::pair<double, double> mean_and_stderr(std::span<const double> values) {
    if (values.empty()) throw InvalidInputError("mean_and_stderr needs at least one value");
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, sd / std::sqrt(n)};
}

CellSummary summarize_runs(const std::vector<RealizationResult>& runs,
                           double alpha, double beta) {
    if (runs.empty()) throw InvalidInputError("summarize_runs needs at least one run");
    std::vector<double> qs;
    std::vector<double> taus;
    qs.reserve(runs.size());
    taus.reserve(runs.size());
    for (const RealizationResult& r : runs) {
        qs.push_back(r.mean_quality);
        taus.push_back(r.tau);
    }
    const auto [mq, sq] = mean_and_stderr(qs);
    const auto [mt, st] = mean_and_stderr(taus);
    CellSummary cell;
    cell.alpha = alpha;
    cell.beta = beta;
    cell.n_runs = static_cast<int>(runs.size());
    cell.mean_q = mq;
    cell.stderr_q = sq;
    cell.mean_tau = mt;
    cell.stderr_tau = st;
    return cell;
}

}  // namespace popmarket
