#include "kscatter/errors.hpp"

namespace kscatter {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::InvalidSeed: return "INVALID_SEED";
    case ErrorCode::ConstraintConflict: return "CONSTRAINT_CONFLICT";
    case ErrorCode::OrderMismatch: return "ORDER_MISMATCH";
    case ErrorCode::NonUnitConstant: return "NON_UNIT_CONSTANT";
    case ErrorCode::NonTransversalPath: return "NON_TRANSVERSAL_PATH";
    case ErrorCode::NonGenericEndpoint: return "NON_GENERIC_ENDPOINT";
    case ErrorCode::UnsupportedRank: return "UNSUPPORTED_RANK";
    case ErrorCode::IntegralityFailure: return "INTEGRALITY_FAILURE";
    case ErrorCode::InconsistentFan: return "INCONSISTENT_FAN";
    case ErrorCode::InvalidFan: return "INVALID_FAN";
    case ErrorCode::FrozenIndex: return "FROZEN_INDEX";
    case ErrorCode::InexactDivision: return "INEXACT_DIVISION";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace kscatter
