#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blowup {

enum class ErrorCode {
  DivisionByZero,
  DomainError,
  SyntaxError,
  UnknownFunction,
  UnboundParameter,
  UnknownBuiltin,
  UnsupportedExpression,
  DegeneratePotential,
  PoleEncountered,
  NotCriticalPoint,
  DomainViolation,
  OriginSingularity,
  StepUnderflow,
  LeftDomain,
  NotSaddle,
  ZeroPotentialValue,
  ZeroBeta,
  BetaTwoScaleDegenerate,
  SchemaViolation,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(ErrorCode::SyntaxError, what + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace blowup
