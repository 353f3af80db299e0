#pragma once

#include <stdexcept>
#include <string>

namespace specrec {

/// A value was requested beyond the known truncation window.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates a documented precondition (degenerate curve, label clash, ...).
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// An exact internal consistency assertion failed (signals a bug or a
/// non-Airy input where an Airy one was required).
struct ConsistencyError : std::logic_error {
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

/// Numerical routine failed to converge or inputs are numerically degenerate.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace specrec
