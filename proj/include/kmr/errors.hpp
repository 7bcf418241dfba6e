#pragma once

#include <stdexcept>
#include <string>

namespace kmr {

// Validation failure: inputs outside the admissible parameter set. CLI exit code 1.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: non-convergence, overflow, or loss of accuracy. CLI exit code 2.
// Carries the best residual achieved when one is meaningful.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg, double residual = 0.0)
      : std::runtime_error(msg), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace kmr
