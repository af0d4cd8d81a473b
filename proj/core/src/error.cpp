#include "stepup/error.hpp"

namespace stepup {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EqualVertices: return "EqualVertices";
    case ErrorCode::TupleTooShort: return "TupleTooShort";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::MalformedTuple: return "MalformedTuple";
    case ErrorCode::InvalidD: return "InvalidD";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::SetTooSmall: return "SetTooSmall";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoNonEdge: return "NoNonEdge";
    case ErrorCode::NeedMoreVertices: return "NeedMoreVertices";
    case ErrorCode::InsufficientLayers: return "InsufficientLayers";
    case ErrorCode::NoGoodTripleInRun: return "NoGoodTripleInRun";
    case ErrorCode::ProofGapTrap: return "ProofGapTrap";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace stepup
