#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace liqshock {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that violate a documented precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Failures detected while marching or solving: singular pivots,
/// non-convergent iterations, breached step-size restrictions.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what,
                            std::optional<int> step = std::nullopt)
        : Error(step ? "step " + std::to_string(*step) + ": " + what : what),
          step_(step) {}

    /// Time level at which the failure occurred, when known.
    std::optional<int> step() const noexcept { return step_; }

private:
    std::optional<int> step_;
};

/// Positivity step-size restriction breached while it was being enforced.
class RestrictionViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace liqshock
