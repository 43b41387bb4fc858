#pragma once

#include <stdexcept>
#include <string>

namespace abreu {

/// Base error carrying a machine-readable kind ("Unbounded", "Empty", ...).
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

/// Bad input data or geometry (CLI exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to converge (CLI exit code 3).
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace abreu
