#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "popmarket/params.hpp"

namespace popmarket {

struct RealizationResult;

enum class TraceScale { log, linear };

// When to record the running average quality during a realization.
struct TraceSchedule {
    std::vector<std::int64_t> times;  // strictly increasing, within [1, T]
    TraceScale scale = TraceScale::log;

    bool enabled() const noexcept { return !times.empty(); }
    static TraceSchedule none() { return {}; }
};

// Aggregate of one (alpha, beta) grid cell over independent runs.
struct CellSummary {
    double alpha = 0.0;
    double beta = 0.0;
    int n_runs = 0;
    double mean_q = 0.0;
    double stderr_q = 0.0;  // sample standard deviation / sqrt(n_runs)
    double mean_tau = 0.0;
    double stderr_tau = 0.0;
};

// Popularity-weighted mean quality, sum(p_i q_i) / sum(p_i).
double average_quality(std::span<const std::int64_t> popularity,
                       std::span<const double> quality);

// Kendall rank correlation. tau_b applies the tie correction
// (C - D) / sqrt((n0 - tx)(n0 - ty)); tau_a divides by n0 = n(n-1)/2.
// Throws UndefinedCorrelationError for tau_b when either vector is all tied.
double kendall_tau(std::span<const double> x, std::span<const double> y,
                   TauVariant variant = TauVariant::tau_b);

// Builds the sampling times for a run of t_steps selections. Linear spacing
// is even and ends at t_steps; log spacing is geometric over
// [max(10, t_steps/10^4), t_steps], deduplicated, always ending at t_steps.
TraceSchedule trace_schedule(std::int64_t t_steps, int n_points, TraceScale scale);

// Mean and standard error (sample sd / sqrt(n)) of a value set; n == 1
// yields a standard error of 0.
std::pair<double, double> mean_and_stderr(std::span<const double> values);

// Means and standard errors of final q-bar and tau across runs.
CellSummary summarize_runs(const std::vector<RealizationResult>& runs,
                           double alpha, double beta);

}  // namespace popmarket
