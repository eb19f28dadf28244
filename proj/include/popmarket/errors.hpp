#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace popmarket {

// Base class for every error this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed caller input: bad lengths, values outside their domain.
struct InvalidInputError : Error {
    using Error::Error;
};

// All qualities are zero, so quality-proportional selection has no normalizer.
struct DegenerateQualityError : Error {
    using Error::Error;
};

// Kendall tau-b has a zero denominator when either vector is completely tied.
struct UndefinedCorrelationError : Error {
    using Error::Error;
};

// Configuration parsing or validation failure; carries the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error("config error [" + key + "]: " + message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Trace output was requested from a grid that carries no traces.
struct NoTraceError : Error {
    using Error::Error;
};

// Filesystem failure while writing results.
struct IoError : Error {
    using Error::Error;
};

}  // namespace popmarket
