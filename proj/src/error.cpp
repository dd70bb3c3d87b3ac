#include "symabs/error.hpp"

namespace symabs {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonSquare: return "NonSquare";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::Diverged: return "Diverged";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::MisalignedSignal: return "MisalignedSignal";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::BadRange: return "BadRange";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::NegativeInput: return "NegativeInput";
        case ErrorCode::EmptyResult: return "EmptyResult";
        case ErrorCode::InputViolation: return "InputViolation";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

}  // namespace symabs
