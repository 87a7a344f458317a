#pragma once

#include <stdexcept>
#include <string>

namespace hwl {

/// Input outside the mathematical domain of an operation (negative scale,
/// inadmissible exponent, empty region, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Requested combination exists mathematically but is not implemented here
/// (e.g. spectral sums for Hermite rank above one).
class UnsupportedError : public std::invalid_argument {
public:
    explicit UnsupportedError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical quality gate failed: quadrature did not converge, a grid did
/// not pass its Parseval check, an embedding was not nonnegative definite.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hwl
