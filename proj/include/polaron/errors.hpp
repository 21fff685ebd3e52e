#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

// Error categories surfaced by the library. The CLI maps each to a
// machine-readable category string and exit code.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* category() const noexcept { return "error"; }
};

struct ParameterError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "parameter"; }
};

struct DomainError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "domain"; }
};

struct NumericalError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "numerical"; }
};

struct ConvergenceError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "convergence"; }
};

struct BudgetError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "budget"; }
};

struct ConsistencyError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "consistency"; }
};

struct ConfigError : Error {
    using Error::Error;
    const char* category() const noexcept override { return "config"; }
};

}  // namespace polaron
