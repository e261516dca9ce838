#pragma once

#include <stdexcept>
#include <string>

namespace ming {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPrimeN : public Error {
 public:
  explicit NonPrimeN(int n)
      : Error("number of oscillators must be prime, got " + std::to_string(n)) {}
};

class CapExceeded : public Error {
 public:
  CapExceeded(int n, int cap)
      : Error("full orbit decomposition is capped at n <= " + std::to_string(cap) +
              ", got " + std::to_string(n)) {}
};

class FixedPointInput : public Error {
 public:
  FixedPointInput() : Error("index is a fixed point of the rotation (all zeros or all ones)") {}
};

class NotNormalized : public Error {
 public:
  explicit NotNormalized(double norm)
      : Error("state is not normalized (norm = " + std::to_string(norm) + ")") {}
};

class QuadratureUnderresolved : public Error {
 public:
  QuadratureUnderresolved(long steps, long required)
      : Error("quadrature needs at least " + std::to_string(required) + " steps, got " +
              std::to_string(steps)) {}
};

class IllFormedObservable : public Error {
 public:
  using Error::Error;
};

}  // namespace ming
