#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "popmarket/config.hpp"
#include "popmarket/csv.hpp"
#include "popmarket/version.hpp"

namespace {

using popmarket::ConfigError;
using nlohmann::json;

struct CliOptions {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int workers = 1;
    int top = 10;
    std::vector<std::string> overrides;
};

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file (defaults apply when omitted)");
    cmd->add_option("--seed", opts.seed, "Master seed; overrides the config value");
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--workers", opts.workers,
                    "Worker threads (0 = all cores; env POPMARKET_WORKERS as fallback)");
    cmd->add_option("--set", opts.overrides, "Override a config key, e.g. --set beta=0.4")
        ->take_all();
}

// File config (if any) + --set overrides + --seed, in that precedence order.
popmarket::SweepConfig resolve_config(const CliOptions& opts, bool seed_given) {
    json raw = json::object();
    if (!opts.config_path.empty()) {
        raw = popmarket::load_config_json(opts.config_path);
    }
    for (const auto& assignment : opts.overrides) {
        popmarket::apply_override(raw, assignment);
    }
    popmarket::SweepConfig config = popmarket::config_from_json(raw);
    if (seed_given) {
        config.master_seed = opts.seed;
    }
    return config;
}

int resolve_workers(const CliOptions& opts, bool workers_given) {
    if (workers_given) {
        return opts.workers;
    }
    const char* env = std::getenv("POPMARKET_WORKERS");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 0 || value > 4096) {
        throw ConfigError("POPMARKET_WORKERS", "must be an integer in [0, 4096]");
    }
    return static_cast<int>(value);
}

std::string output_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw popmarket::IoError("cannot create output directory " + dir + ": " + ec.message());
    }
}

void write_manifest(const popmarket::SweepConfig& config, const std::string& started_at,
                    const std::vector<std::string>& data_files, const std::string& dir) {
    popmarket::RunManifest manifest;
    manifest.artifact = "popmarket";
    manifest.version = popmarket::kVersion;
    manifest.started_at = started_at;
    manifest.finished_at = popmarket::utc_timestamp();
    manifest.master_seed = config.master_seed;
    manifest.config = popmarket::config_to_json(config);
    manifest.outputs = data_files;
    const std::string path = output_path(dir, "manifest.json");
    popmarket::write_text_file(path, popmarket::manifest_json(manifest).dump(2) + "\n");
    std::cout << "wrote " << path << "\n";
}

int cmd_simulate(const popmarket::SweepConfig& config, int workers, int top) {
    if (config.alphas.size() != 1) {
        throw ConfigError("alphas", "simulate runs a single cell; give exactly one alpha");
    }
    if (config.betas.size() != 1) {
        throw ConfigError("betas", "simulate runs a single cell; give exactly one beta");
    }

    const popmarket::GridResult grid = popmarket::run_grid(config, workers);
    const popmarket::CellSummary& cell = grid.cell(0, 0);
    std::printf("alpha %g  beta %g  n_items %d  t_steps %lld  n_runs %d  master_seed %llu\n",
                cell.alpha, cell.beta, config.n_items,
                static_cast<long long>(config.t_steps), config.n_runs,
                static_cast<unsigned long long>(config.master_seed));
    std::printf("mean_q %.6g  stderr_q %.6g\n", cell.mean_q, cell.stderr_q);
    std::printf("mean_tau %.6g  stderr_tau %.6g\n", cell.mean_tau, cell.stderr_tau);

    // Item-level view from the cell's first realization, replayed by seed.
    const popmarket::ModelParams params = config.params_at(0, 0);
    const std::uint64_t run_seed = popmarket::derive_seed(config.master_seed, 0, 0, 0);
    const popmarket::RealizationResult run = popmarket::run_realization(
        params, config.t_steps, popmarket::TraceSchedule::none(), run_seed,
        config.tau_variant);

    std::vector<std::size_t> order(run.popularity.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return run.popularity[a] > run.popularity[b];
    });

    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(top, 0)),
                                                order.size());
    const double total = static_cast<double>(config.n_items) +
                         static_cast<double>(config.t_steps);
    std::printf("\ntop %zu of %zu items by final count (first run, seed %llu):\n", k,
                order.size(), static_cast<unsigned long long>(run_seed));
    std::printf("%5s %6s %10s %8s %9s\n", "rank", "item", "count", "share", "quality");
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t item = order[i];
        std::printf("%5zu %6zu %10lld %8.4f %9.4f\n", i + 1, item,
                    static_cast<long long>(run.popularity[item]),
                    static_cast<double>(run.popularity[item]) / total, run.qualities[item]);
    }
    return 0;
}

int cmd_sweep(const popmarket::SweepConfig& config, int workers, const std::string& out_dir) {
    ensure_out_dir(out_dir);
    const std::string started_at = popmarket::utc_timestamp();
    const popmarket::GridResult grid = popmarket::run_grid(config, workers);
    const std::string grid_path = output_path(out_dir, "grid.csv");
    popmarket::write_grid_csv(grid, grid_path);
    std::cout << "wrote " << grid_path << "\n";
    write_manifest(config, started_at, {grid_path}, out_dir);
    return 0;
}

int cmd_trace(popmarket::SweepConfig config, int workers, const std::string& out_dir) {
    if (!config.trace) {
        config.trace = popmarket::TraceSpec{};
    }
    ensure_out_dir(out_dir);
    const std::string started_at = popmarket::utc_timestamp();
    const popmarket::GridResult grid = popmarket::run_grid(config, workers);
    const std::string trace_path = output_path(out_dir, "trace.csv");
    const std::string grid_path = output_path(out_dir, "grid.csv");
    popmarket::write_trace_csv(grid, trace_path);
    std::cout << "wrote " << trace_path << "\n";
    popmarket::write_grid_csv(grid, grid_path);
    std::cout << "wrote " << grid_path << "\n";
    write_manifest(config, started_at, {trace_path, grid_path}, out_dir);
    return 0;
}

int cmd_validate(const popmarket::SweepConfig& config) {
    std::cout << popmarket::config_to_json(config).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cultural market simulator: quality-driven vs popularity-biased choice"};
    app.set_version_flag("--version", popmarket::kVersion);
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run one (alpha, beta) cell and print a summary");
    CLI::App* sweep =
        app.add_subcommand("sweep", "Run the full grid and write grid.csv + manifest.json");
    CLI::App* trace = app.add_subcommand(
        "trace", "Run the grid with quality tracing and write trace.csv as well");
    CLI::App* validate =
        app.add_subcommand("validate", "Parse the config, print resolved values, run nothing");
    for (CLI::App* cmd : {simulate, sweep, trace, validate}) {
        add_common_options(cmd, opts);
    }
    simulate->add_option("--top", opts.top, "How many items to list")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    CLI::App* cmd = app.get_subcommands().front();
    try {
        const popmarket::SweepConfig config = resolve_config(opts, cmd->count("--seed") > 0);
        const int workers = resolve_workers(opts, cmd->count("--workers") > 0);
        if (cmd == simulate) {
            return cmd_simulate(config, workers, opts.top);
        }
        if (cmd == sweep) {
            return cmd_sweep(config, workers, opts.out_dir);
        }
        if (cmd == trace) {
            return cmd_trace(config, workers, opts.out_dir);
        }
        return cmd_validate(config);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
