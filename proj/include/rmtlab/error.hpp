#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmtlab {

enum class ErrorKind {
    NonFinite,
    DimensionMismatch,
    IllConditionedBasis,
    PoleProximity,
    InvalidDimension,
    KindMismatch,
    TOutOfRange,
    DegenerateT,
    OnSupport,
    RegimeViolation,
    NegativeArgument,
    InvalidArgument,
    NonOrthonormal,
    DegenerateCoupling,
    RefinementExhausted,
    CardinalityMismatch,
    GapTooSmall,
    CollisionAbort,
    OverlappingDomains,
    InvalidTruncation,
    TruncationTooSmall,
    DegenerateInput,
    CountMismatch,
    InsufficientTrials,
    BiorthogonalityViolated,
    InvalidConfig,
    IoFailure,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one ErrorKind; the message adds context.
class LabError : public std::runtime_error {
public:
    LabError(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace rmtlab
