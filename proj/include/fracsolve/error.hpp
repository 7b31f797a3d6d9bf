#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracsolve {

/// Failure taxonomy shared by every module. The C API maps these one-to-one
/// onto fs_status codes, and the CLI maps them onto exit codes.
enum class ErrorCode {
  InvalidArgument,
  NoRepresentation,
  PoleError,
  DomainError,
  NonConvergence,
  ComplexSpectrum,
  ClusteredSpectrum,
  SingularEigenvectors,
  Singular,
  Overflow,
  ZeroEigenvalue,
  OrderDomain,
  QuadratureFailure,
  NonUniformGrid,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fracsolve
