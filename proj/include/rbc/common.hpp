#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace rbc {

// Violated precondition or malformed input.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure (ill-conditioning, non-convergence, consistency breach).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace rbc
