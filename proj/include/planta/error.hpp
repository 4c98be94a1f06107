#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planta {

enum class ErrorCode {
  OutOfDomain,
  OutOfRange,
  NonMonotone,
  InsufficientData,
  ZeroMean,
  EmptyGrid,
  NonPositive,
  Infeasible,
  RangeError,
  StrainOutOfRange,
  NonPositiveRadius,
  SanityRange,
  NoEqualization,
  ZeroCurrent,
  ParseError,
  InvariantViolation,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. The code identifies the failure
/// class; callers that need to branch (the CLI maps codes to exit statuses)
/// switch on it rather than on the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace planta
