#pragma once

#include <stdexcept>
#include <string>

namespace agsense {

// Bad inputs, malformed files, contract violations. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values, divergence, failed solves. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace agsense
