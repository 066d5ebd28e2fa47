#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace blochform {

/// Raised when caller-supplied parameters violate a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is invoked outside the regime it handles
/// (for example asking for a complex pair when all roots are real).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an assembled solution fails its own consistency checks.
/// Carries the offending residuals so the failing branch can be located.
class CertificationError : public std::runtime_error {
 public:
  CertificationError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace blochform
