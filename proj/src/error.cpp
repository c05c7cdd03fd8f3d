#include "rmtlab/error.hpp"

namespace rmtlab {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::IllConditionedBasis: return "IllConditionedBasis";
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::InvalidDimension: return "InvalidDimension";
        case ErrorKind::KindMismatch: return "KindMismatch";
        case ErrorKind::TOutOfRange: return "TOutOfRange";
        case ErrorKind::DegenerateT: return "DegenerateT";
        case ErrorKind::OnSupport: return "OnSupport";
        case ErrorKind::RegimeViolation: return "RegimeViolation";
        case ErrorKind::NegativeArgument: return "NegativeArgument";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NonOrthonormal: return "NonOrthonormal";
        case ErrorKind::DegenerateCoupling: return "DegenerateCoupling";
        case ErrorKind::RefinementExhausted: return "RefinementExhausted";
        case ErrorKind::CardinalityMismatch: return "CardinalityMismatch";
        case ErrorKind::GapTooSmall: return "GapTooSmall";
        case ErrorKind::CollisionAbort: return "CollisionAbort";
        case ErrorKind::OverlappingDomains: return "OverlappingDomains";
        case ErrorKind::InvalidTruncation: return "InvalidTruncation";
        case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
        case ErrorKind::DegenerateInput: return "DegenerateInput";
        case ErrorKind::CountMismatch: return "CountMismatch";
        case ErrorKind::InsufficientTrials: return "InsufficientTrials";
        case ErrorKind::BiorthogonalityViolated: return "BiorthogonalityViolated";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

LabError::LabError(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw LabError(kind, message); }

}  // namespace rmtlab
