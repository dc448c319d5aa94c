#pragma once

#include <stdexcept>
#include <string>

namespace cwsrep {

// Base class for everything the library throws. The CLI maps each subclass
// to its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong degree, broken exponent table, out-of-range argument.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but violates a mathematical hypothesis of the
// requested operation (not hyperbolic, not transverse, no interlacing...).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

// Floating point pipeline gave up: residual too large, definiteness lost,
// retries or perturbation schedule exhausted.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cwsrep
