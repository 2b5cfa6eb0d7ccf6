#pragma once

#include <stdexcept>
#include <string>

namespace samplan {

// Bad parameter values or malformed run configuration.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or inconsistent input data (CSV rows, schema mismatches, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input on which the requested statistic is undefined
// (zero mean, single value, zero dispersion, ...).
class DegenerateInputError : public std::domain_error {
public:
    explicit DegenerateInputError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace samplan
