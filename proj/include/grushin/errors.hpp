#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

// Bad input: violated preconditions, malformed configuration.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Grid too coarse for the requested mode or operator.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Region, path or planar domain cannot be built.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown (singular solve, lost orthogonality, divergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grushin
