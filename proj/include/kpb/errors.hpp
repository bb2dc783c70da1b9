#pragma once

#include <stdexcept>
#include <string>

namespace kpb {

struct ZeroModeViolation : std::runtime_error {
    explicit ZeroModeViolation(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureError : std::runtime_error {
    double achieved_error;
    QuadratureError(const std::string& what, double err)
        : std::runtime_error(what), achieved_error(err) {}
};

struct DivergenceError : std::runtime_error {
    double last_valid_time;
    DivergenceError(const std::string& what, double t)
        : std::runtime_error(what), last_valid_time(t) {}
};

struct ConfigError : std::runtime_error {
    int line;
    std::string key;
    ConfigError(int line_, std::string key_, const std::string& reason)
        : std::runtime_error("config line " + std::to_string(line_) + ", key '" + key_ +
                             "': " + reason),
          line(line_), key(std::move(key_)) {}
};

struct InsufficientSamples : std::runtime_error {
    explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

struct NonPositiveValue : std::runtime_error {
    explicit NonPositiveValue(const std::string& what) : std::runtime_error(what) {}
};

struct UndefinedMargin : std::runtime_error {
    explicit UndefinedMargin(const std::string& what) : std::runtime_error(what) {}
};

struct MissingInput : std::runtime_error {
    explicit MissingInput(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kpb
