#pragma once

#include <stdexcept>
#include <string>

namespace contagion {

/// Argument outside the mathematical domain of an operation (negative
/// Laplace argument, odd system index, time outside a history, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Model parameters violate a standing assumption (non-positive decay,
/// negative rate, malformed mark law, unparsable config).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A stationary quantity was requested for parameters whose excitation
/// matrix has spectral radius >= 1.
class NonStationaryError : public std::runtime_error {
public:
    NonStationaryError(const std::string& what, double radius)
        : std::runtime_error(what), radius_(radius) {}
    double radius() const noexcept { return radius_; }

private:
    double radius_;
};

/// An iterative numerical procedure stopped before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double gap)
        : std::runtime_error(what), gap_(gap) {}
    double gap() const noexcept { return gap_; }

private:
    double gap_;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace contagion
