// SPDX-License-Identifier: Apache-2.0
#ifndef VESSELMIP_ERRORS_HPP
#define VESSELMIP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vesselmip {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Windowing bounds with lo >= hi.
class InvalidWindowError : public Error {
public:
    using Error::Error;
};

// Shape disagreement between two containers that must match.
class DimsMismatchError : public Error {
public:
    using Error::Error;
};

// File read/write failure, malformed header, or payload length mismatch.
class IoError : public Error {
public:
    using Error::Error;
};

// Phantom could not be placed inside the requested extent.
class GenerationError : public Error {
public:
    using Error::Error;
};

// Non-finite loss during optimization; carries the offending step.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, int step)
        : Error(msg), step_(step) {}
    int step() const noexcept { return step_; }

private:
    int step_;
};

// Metric that has no defined value for the given inputs.
class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace vesselmip

#endif
