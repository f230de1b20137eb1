#pragma once

#include <stdexcept>
#include <string>

namespace qfp {

/// Input outside an operation's mathematical domain (bad parameter, out-of-range argument).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Base for failures detected while a numerical method is running.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Negative effective diffusivity/temperature or a violated stability bound.
class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// NaN, negative density beyond the clip threshold, or lost normalization.
class IntegrityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Adaptive step size underflow.
class StiffnessError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Shooting trajectory left the admissible region, or the bracket could not be formed.
class ShootingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qfp
