#pragma once

#include <stdexcept>
#include <string>

namespace sigfolio {

// Runtime failure inside a pipeline stage (bad data file, solver breakdown, ...).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// User-facing configuration / validation problem. The CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sigfolio
