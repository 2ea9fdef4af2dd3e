#pragma once

#include <stdexcept>
#include <string>

namespace groupfair {

/// Bad experiment or policy configuration (unknown preset, inconsistent sizes, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Problems with external data files (CSV, schema).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear system that cannot be solved without regularization.
class SingularSystemError : public std::runtime_error {
public:
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace groupfair
