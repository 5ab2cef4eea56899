// errors.hpp — exception types shared across the library
#pragma once

#include <stdexcept>
#include <string>

namespace gaussgeo {

// Eigen-solve breakdown, quadrature non-convergence, rejection-budget
// exhaustion, negative radicands beyond rounding noise.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed covariance files (bad JSON, wrong element count, odd dimension).
class FileFormatError : public std::runtime_error {
public:
    explicit FileFormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gaussgeo
