#pragma once

#include <string>

#include "json.hpp"
#include "popmarket/experiment.hpp"

namespace popmarket {

// Reads and validates a sweep config from a JSON file. Unknown keys are
// rejected; omitted keys take the documented defaults. All failures throw
// ConfigError naming the offending key.
SweepConfig parse_config(const std::string& path);

// Raw JSON object from a config file, before validation. Missing file and
// malformed JSON throw ConfigError.
nlohmann::json load_config_json(const std::string& path);

// Same, from an already-parsed JSON object.
SweepConfig config_from_json(const nlohmann::json& j);

// Canonical JSON form of a config: plural grid keys, every field explicit,
// trace only when enabled. config_from_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const SweepConfig& config);

// Applies one "key=value" override to a raw config object. The value parses
// as JSON when possible and falls back to a string; "trace.n_points=8" style
// dotted keys reach into the trace object. Setting "alpha" or "beta" drops a
// previously present plural twin (and vice versa) so the last override wins.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace popmarket
