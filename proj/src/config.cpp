#include "popmarket/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace popmarket {

using nlohmann::json;

namespace {

double number_value(const json& v, const std::string& key) {
    if (!v.is_number()) {
        throw ConfigError(key, "must be a number");
    }
    return v.get<double>();
}

std::int64_t integer_value(const json& v, const std::string& key) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ConfigError(key, "must be an integer");
    }
    return v.get<std::int64_t>();
}

std::uint64_t seed_value(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        const std::int64_t s = v.get<std::int64_t>();
        if (s < 0) {
            throw ConfigError(key, "must be a non-negative integer");
        }
        return static_cast<std::uint64_t>(s);
    }
    throw ConfigError(key, "must be a non-negative integer");
}

double alpha_value(const json& v, const std::string& key) {
    const double a = number_value(v, key);
    if (!std::isfinite(a) || a < 0.0) {
        throw ConfigError(key, "must be finite and >= 0");
    }
    return a;
}

double beta_value(const json& v, const std::string& key) {
    const double b = number_value(v, key);
    if (!std::isfinite(b) || b < 0.0 || b > 1.0) {
        throw ConfigError(key, "must lie in [0, 1]");
    }
    return b;
}

std::vector<double> grid_values(const json& v, const std::string& key,
                                double (*element)(const json&, const std::string&)) {
    if (!v.is_array()) {
        throw ConfigError(key, "must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        out.push_back(element(e, key));
    }
    return out;
}

TraceSpec trace_spec(const json& v) {
    if (!v.is_object()) {
        throw ConfigError("trace", "must be an object or null");
    }
    TraceSpec spec;
    for (const auto& [k, val] : v.items()) {
        if (k == "n_points") {
            const std::int64_t n = integer_value(val, "trace.n_points");
            if (n < 1) {
                throw ConfigError("trace.n_points", "must be >= 1");
            }
            spec.n_points = static_cast<int>(n);
        } else if (k == "scale") {
            if (!val.is_string()) {
                throw ConfigError("trace.scale", "must be \"log\" or \"linear\"");
            }
            const std::string s = val.get<std::string>();
            if (s == "log") {
                spec.scale = TraceScale::log;
            } else if (s == "linear") {
                spec.scale = TraceScale::linear;
            } else {
                throw ConfigError("trace.scale", "must be \"log\" or \"linear\"");
            }
        } else {
            throw ConfigError("trace." + k, "unknown key");
        }
    }
    return spec;
}

}  // namespace

SweepConfig config_from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config", "top level must be a JSON object");
    }
    if (j.contains("alpha") && j.contains("alphas")) {
        throw ConfigError("alpha", "cannot be combined with \"alphas\"");
    }
    if (j.contains("beta") && j.contains("betas")) {
        throw ConfigError("beta", "cannot be combined with \"betas\"");
    }

    SweepConfig config;
    for (const auto& [key, value] : j.items()) {
        if (key == "alphas") {
            config.alphas = grid_values(value, "alphas", alpha_value);
        } else if (key == "alpha") {
            config.alphas = {alpha_value(value, "alpha")};
        } else if (key == "betas") {
            config.betas = grid_values(value, "betas", beta_value);
        } else if (key == "beta") {
            config.betas = {beta_value(value, "beta")};
        } else if (key == "n_items") {
            const std::int64_t n = integer_value(value, "n_items");
            if (n < 2 || n > 100000000) {
                throw ConfigError("n_items", "must be an integer in [2, 1e8]");
            }
            config.n_items = static_cast<int>(n);
        } else if (key == "t_steps") {
            const std::int64_t t = integer_value(value, "t_steps");
            if (t < 1) {
                throw ConfigError("t_steps", "must be >= 1");
            }
            config.t_steps = t;
        } else if (key == "n_runs") {
            const std::int64_t r = integer_value(value, "n_runs");
            if (r < 1 || r > 10000000) {
                throw ConfigError("n_runs", "must be an integer in [1, 1e7]");
            }
            config.n_runs = static_cast<int>(r);
        } else if (key == "master_seed") {
            config.master_seed = seed_value(value, "master_seed");
        } else if (key == "tie_rank_mode") {
            if (!value.is_string()) {
                throw ConfigError("tie_rank_mode", "must be \"max_rank\" or \"min_rank\"");
            }
            const std::string s = value.get<std::string>();
            if (s == "max_rank") {
                config.tie_rank_mode = TieRankMode::max_rank;
            } else if (s == "min_rank") {
                config.tie_rank_mode = TieRankMode::min_rank;
            } else {
                throw ConfigError("tie_rank_mode", "must be \"max_rank\" or \"min_rank\"");
            }
        } else if (key == "tau_variant") {
            if (!value.is_string()) {
                throw ConfigError("tau_variant", "must be \"tau_b\" or \"tau_a\"");
            }
            const std::string s = value.get<std::string>();
            if (s == "tau_b") {
                config.tau_variant = TauVariant::tau_b;
            } else if (s == "tau_a") {
                config.tau_variant = TauVariant::tau_a;
            } else {
                throw ConfigError("tau_variant", "must be \"tau_b\" or \"tau_a\"");
            }
        } else if (key == "trace") {
            if (value.is_null()) {
                config.trace.reset();
            } else {
                config.trace = trace_spec(value);
            }
        } else {
            throw ConfigError(key, "unknown key");
        }
    }

    config.validate();
    return config;
}

json load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot read file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
}

SweepConfig parse_config(const std::string& path) {
    return config_from_json(load_config_json(path));
}

json config_to_json(const SweepConfig& config) {
    json j;
    j["alphas"] = config.alphas;
    j["betas"] = config.betas;
    j["n_items"] = config.n_items;
    j["t_steps"] = config.t_steps;
    j["n_runs"] = config.n_runs;
    j["master_seed"] = config.master_seed;
    j["tie_rank_mode"] =
        config.tie_rank_mode == TieRankMode::max_rank ? "max_rank" : "min_rank";
    j["tau_variant"] = config.tau_variant == TauVariant::tau_b ? "tau_b" : "tau_a";
    if (config.trace) {
        j["trace"] = {
            {"n_points", config.trace->n_points},
            {"scale", config.trace->scale == TraceScale::log ? "log" : "linear"},
        };
    }
    return j;
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set", "override must look like key=value: " + assignment);
    }
    const std::string key_path = assignment.substr(0, eq);
    const std::string raw_value = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw_value);
    } catch (const json::parse_error&) {
        value = raw_value;  // bare words like max_rank pass through as strings
    }

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = key_path.find('.', start);
        if (dot == std::string::npos) {
            parts.push_back(key_path.substr(start));
            break;
        }
        parts.push_back(key_path.substr(start, dot - start));
        start = dot + 1;
    }
    for (const auto& part : parts) {
        if (part.empty()) {
            throw ConfigError("--set", "override key must be non-empty: " + assignment);
        }
    }

    // A scalar override replaces its plural twin (and vice versa), so the
    // last --set wins regardless of what the file said.
    if (parts.size() == 1) {
        static const std::pair<const char*, const char*> twins[] = {
            {"alpha", "alphas"}, {"alphas", "alpha"}, {"beta", "betas"}, {"betas", "beta"}};
        for (const auto& [name, twin] : twins) {
            if (parts[0] == name) {
                j.erase(twin);
            }
        }
    }

    json* node = &j;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        json& child = (*node)[parts[i]];
        if (!child.is_object()) {
            child = json::object();
        }
        node = &child;
    }
    (*node)[parts.back()] = value;
}

}  // namespace popmarket
