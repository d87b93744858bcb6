#pragma once

#include <stdexcept>
#include <string>

namespace cqsim {

// Exception hierarchy. The CLI maps each category onto a process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad flags, config values or parameter domains.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

// A quantity is undefined for the data at hand (empty quadrant, zero variance,
// coincident centroids, ...).
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace cqsim
