#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "popmarket/experiment.hpp"

namespace popmarket {

// Grid summaries as CSV: header alpha,beta,n_runs,mean_q,stderr_q,mean_tau,
// stderr_tau; one row per cell sorted by (alpha, beta); reals with 6
// significant digits. Byte output is deterministic for a given grid.
std::string grid_csv(const GridResult& grid);

// Per-cell quality traces as CSV: header alpha,beta,t,mean_q,stderr_q; rows
// sorted by (alpha, beta, t). Throws NoTraceError when the grid has no traces.
std::string trace_csv(const GridResult& grid);

// Writes content to path, overwriting. Throws IoError on failure.
void write_text_file(const std::string& path, const std::string& content);

void write_grid_csv(const GridResult& grid, const std::string& path);
void write_trace_csv(const GridResult& grid, const std::string& path);

// Provenance record emitted next to every data file.
struct RunManifest {
    std::string artifact;
    std::string version;
    std::string started_at;   // UTC, ISO 8601
    std::string finished_at;  // UTC, ISO 8601
    std::uint64_t master_seed = 0;
    nlohmann::json config;
    std::vector<std::string> outputs;
};

nlohmann::json manifest_json(const RunManifest& manifest);

// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace popmarket
