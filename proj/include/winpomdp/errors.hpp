#pragma once

#include <stdexcept>
#include <string>

namespace winpomdp {

// Structural invariant violations (row sums, value ranges, bad shapes).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments to an operation (mismatched dimensions, infeasible floors, ...).
struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

// Zero-probability event hit during belief filtering.
struct FilteringError : std::runtime_error {
    explicit FilteringError(const std::string& what) : std::runtime_error(what) {}
};

// Window with zero forward probability under the prior.
struct UnreachableWindowError : FilteringError {
    explicit UnreachableWindowError(const std::string& what) : FilteringError(what) {}
};

// Requested object exceeds configured size limits.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (non-convergence, broken contraction).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem / serialization failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace winpomdp
