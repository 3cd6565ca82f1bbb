#pragma once

#include <stdexcept>
#include <string>

namespace payg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters or configuration. The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A schedule, series or profile does not cover a requested year or age.
class CoverageError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Ratio estimation failed (zero denominator, too short a history).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Simulation state that should be unreachable from a valid config.
class StateError : public Error {
public:
    using Error::Error;
};

} // namespace payg
