#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace logman {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (r <= 0, negative base with
/// fractional exponent, empty ball, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A theorem or operation precondition does not hold for the given data.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed: singular system, no convergence, broken
/// monotonicity. Optionally carries the last iterate.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, std::vector<double> last = {})
        : Error(what), last_iterate_(std::move(last)) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

private:
    std::vector<double> last_iterate_;
};

/// Numerical evidence does not allow a decision (degenerate fit, no sign
/// change on a grid, finite tabulated range).
class InconclusiveError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or scenario.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace logman
