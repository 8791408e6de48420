#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical procedure fails to deliver the requested accuracy
/// (stalled step controller, missing events, non-converged quadrature).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double estimate)
      : NumericalError(what), estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

}  // namespace nodal
