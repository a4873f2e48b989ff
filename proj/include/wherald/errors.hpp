#pragma once

#include <stdexcept>
#include <string>

namespace wherald {

// Raised when a scenario config is malformed or inconsistent.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a numerical guarantee is violated at run time
// (norm drift, broken unitarity, failed convergence).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wherald
