#include "blowup/error.hpp"

namespace blowup {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnboundParameter: return "UnboundParameter";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::UnsupportedExpression: return "UnsupportedExpression";
    case ErrorCode::DegeneratePotential: return "DegeneratePotential";
    case ErrorCode::PoleEncountered: return "PoleEncountered";
    case ErrorCode::NotCriticalPoint: return "NotCriticalPoint";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::OriginSingularity: return "OriginSingularity";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::NotSaddle: return "NotSaddle";
    case ErrorCode::ZeroPotentialValue: return "ZeroPotentialValue";
    case ErrorCode::ZeroBeta: return "ZeroBeta";
    case ErrorCode::BetaTwoScaleDegenerate: return "BetaTwoScaleDegenerate";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace blowup
