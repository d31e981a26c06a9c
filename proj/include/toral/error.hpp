#pragma once

#include <stdexcept>
#include <string>

namespace toral {

/// Failure categories; each maps onto one CLI exit code.
enum class ErrorKind {
    input = 1,       // malformed or inconsistent input
    hypothesis = 2,  // input outside the hypotheses of the analysis
    invariant = 3,   // an internal consistency check failed
    budget = 4,      // iteration / radius / search budget exhausted
};

class Error : public std::runtime_error {
public:
    Error(std::string module, ErrorKind kind, const std::string& message)
        : std::runtime_error(module + ": " + message), module_(std::move(module)), kind_(kind) {}

    const std::string& module() const noexcept { return module_; }
    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    std::string module_;
    ErrorKind kind_;
};

}  // namespace toral
