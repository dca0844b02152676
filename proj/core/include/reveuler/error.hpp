#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reveuler {

enum class ErrorKind {
  Validation,
  SingularPoint,
  InsufficientSamples,
  QuadratureNonConvergent,
  ZeroTime,
  InsufficientSlab,
  MissingDerivative,
  NonFiniteField,
  NoContraction,
  NotCauchy,
  CertificateMissing,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace reveuler
