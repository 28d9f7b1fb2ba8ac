#pragma once

#include <stdexcept>
#include <string>

namespace hweno {

/// Bad caller input: empty grids, unknown scheme pairings, mismatched sizes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Name lookup failed (flux or problem registry).
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Non-finite values or blow-up detected during initialization or evolution.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reconstruction table could not be derived (singular fit or inconsistent weights).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solve for the exact solution failed (typically past shock formation).
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A first-order step was requested with a time step above the monotonicity limit.
class CflViolation : public InvalidArgument {
 public:
  CflViolation(double requested, double required)
      : InvalidArgument("CFL violation: dt = " + std::to_string(requested) +
                        " exceeds the stable limit " + std::to_string(required)),
        requested_(requested),
        required_(required) {}

  double requested() const noexcept { return requested_; }
  double required() const noexcept { return required_; }

 private:
  double requested_;
  double required_;
};

}  // namespace hweno
