#pragma once

#include <stdexcept>
#include <string>

namespace prcsync {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes (see tools/prcsync.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The constraint parameters admit no unique periodic optimum.
class InadmissibleCase : public Error {
 public:
  using Error::Error;
};

/// A tangent or near-coincident zero of a PRC.
class DegenerateRoot : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Euler-Maruyama produced a phase increment too large to be trusted.
class UnstableStep : public Error {
 public:
  using Error::Error;
};

}  // namespace prcsync
