#include "fracsolve/error.hpp"

namespace fracsolve {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoRepresentation: return "NoRepresentation";
    case ErrorCode::PoleError: return "PoleError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::ClusteredSpectrum: return "ClusteredSpectrum";
    case ErrorCode::SingularEigenvectors: return "SingularEigenvectors";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::OrderDomain: return "OrderDomain";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
  }
  return "Unknown";
}

}  // namespace fracsolve
