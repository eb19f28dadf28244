#include "popmarket/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numeric>

namespace popmarket {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Cell indices ordered by (alpha, beta) value; index order breaks ties so the
// output is stable even for grids with repeated values.
std::vector<std::size_t> sorted_cell_order(const GridResult& grid) {
    const std::size_t nb = grid.config.betas.size();
    std::vector<std::size_t> order(grid.cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double aa = grid.config.alphas[a / nb];
        const double ab = grid.config.alphas[b / nb];
        if (aa != ab) {
            return aa < ab;
        }
        return grid.config.betas[a % nb] < grid.config.betas[b % nb];
    });
    return order;
}

}  // namespace

std::string grid_csv(const GridResult& grid) {
    std::string out = "alpha,beta,n_runs,mean_q,stderr_q,mean_tau,stderr_tau\n";
    for (std::size_t idx : sorted_cell_order(grid)) {
        const CellSummary& c = grid.cells[idx];
        out += fmt(c.alpha) + ',' + fmt(c.beta) + ',' + std::to_string(c.n_runs) + ',' +
               fmt(c.mean_q) + ',' + fmt(c.stderr_q) + ',' + fmt(c.mean_tau) + ',' +
               fmt(c.stderr_tau) + '\n';
    }
    return out;
}

std::string trace_csv(const GridResult& grid) {
    if (!grid.has_traces()) {
        throw NoTraceError("tracing was not enabled for this sweep");
    }
    std::string out = "alpha,beta,t,mean_q,stderr_q\n";
    for (std::size_t idx : sorted_cell_order(grid)) {
        const CellSummary& c = grid.cells[idx];
        const CellTrace& trace = grid.traces[idx];
        for (std::size_t k = 0; k < trace.times.size(); ++k) {
            out += fmt(c.alpha) + ',' + fmt(c.beta) + ',' +
                   std::to_string(trace.times[k]) + ',' + fmt(trace.mean_q[k]) + ',' +
                   fmt(trace.stderr_q[k]) + '\n';
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path);
    }
}

void write_grid_csv(const GridResult& grid, const std::string& path) {
    write_text_file(path, grid_csv(grid));
}

void write_trace_csv(const GridResult& grid, const std::string& path) {
    write_text_file(path, trace_csv(grid));
}

nlohmann::json manifest_json(const RunManifest& manifest) {
    return nlohmann::json{
        {"artifact", manifest.artifact},
        {"version", manifest.version},
        {"started_at", manifest.started_at},
        {"finished_at", manifest.finished_at},
        {"master_seed", manifest.master_seed},
        {"config", manifest.config},
        {"outputs", manifest.outputs},
    };
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace popmarket
