#pragma once

#include <stdexcept>
#include <string>

namespace hapsris {

/// Bad or inconsistent configuration value. `key()` names the offending field when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& msg)
        : std::runtime_error(key.empty() ? msg : key + ": " + msg), key_(std::move(key))
    {
    }
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// A scenario or allocation instance that cannot be realized (placement, budgets).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown in a solver that a caller should surface, not swallow.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hapsris
