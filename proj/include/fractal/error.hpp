#pragma once

#include <stdexcept>
#include <string>

namespace fractal {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (mu out of range, bad subdivision, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Evaluation point outside the span of a table or grid.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Requested resolution cannot be realised at the permitted depth, or a grid
/// is too coarse for the operation.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Non-finite arithmetic, underflowing finite-difference steps, blow-up.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A precondition of a verification routine does not hold.
class PreconditionError : public Error {
public:
    PreconditionError(std::string condition, const std::string& what)
        : Error(what), condition_(std::move(condition)) {}

    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

}  // namespace fractal
