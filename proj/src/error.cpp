#include "planta/error.hpp"

namespace planta {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::ZeroMean: return "ZeroMean";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::StrainOutOfRange: return "StrainOutOfRange";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::SanityRange: return "SanityRange";
    case ErrorCode::NoEqualization: return "NoEqualization";
    case ErrorCode::ZeroCurrent: return "ZeroCurrent";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace planta
