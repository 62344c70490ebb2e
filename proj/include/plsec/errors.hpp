#pragma once

#include <stdexcept>
#include <string>

namespace plsec {

/// Argument outside the mathematical domain (pole, non-positive distance, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters are valid numbers but violate a structural precondition
/// (non-integer shape for a series form, no separating contour, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine ran out of budget before meeting its tolerance.
/// Carries the best estimate reached so callers may still use it.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate, double error_estimate)
        : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// Integrand along a Mellin-Barnes contour does not decay.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace plsec
