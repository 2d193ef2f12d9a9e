#pragma once

#include <stdexcept>
#include <string>

namespace micov {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad band edges, window longer
/// than the recording, empty hyperparameter grid, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (ragged CSV, missing file,
/// duplicate subject ids, ...). Messages carry file/line context.
class DataError : public Error {
public:
    using Error::Error;
};

/// A matrix left the mathematical domain of an operation, e.g. a
/// non-positive eigenvalue where SPD was required.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: eigensolver non-convergence, overflow, iteration
/// caps reached without meeting the convergence criterion.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The paired t statistic is undefined (zero-variance differences).
class UndefinedTError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace micov
