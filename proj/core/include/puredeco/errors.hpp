// errors.hpp: Exception hierarchy shared by all puredeco modules

#pragma once

#include <stdexcept>
#include <string>

namespace puredeco {

/// Bad input: wrong dimensions, non-Hermitian operators, invalid states.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mathematically undefined request, e.g. a relative entropy with a support violation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of refinement budget.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, double previous, double last)
        : NumericalError(what), previous_estimate(previous), last_estimate(last) {}

    double previous_estimate;
    double last_estimate;
};

/// Time stepping lost positivity beyond tolerance.
class IntegrationDriftError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Requested combination has no defined answer (e.g. a closed form that does not exist).
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace puredeco
