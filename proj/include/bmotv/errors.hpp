#pragma once

#include <stdexcept>
#include <string>

namespace bmotv {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid model construction or evaluation request (outside domain, at a jump, ...).
struct ModelError : Error {
    using Error::Error;
};

// Malformed configuration / function spec.
struct ConfigError : Error {
    using Error::Error;
};

// File read/write failure.
struct IoError : Error {
    using Error::Error;
};

// A quadrature could not certify the requested tolerance within its budget.
struct ToleranceError : Error {
    double achieved;
    ToleranceError(const std::string& msg, double achieved_bound)
        : Error(msg), achieved(achieved_bound) {}
};

}  // namespace bmotv
