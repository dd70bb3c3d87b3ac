#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symabs {

enum class ErrorCode {
    NonSquare,
    NotSymmetric,
    NotPositiveDefinite,
    NonFinite,
    DimensionMismatch,
    Overflow,
    Diverged,
    NotConverged,
    MisalignedSignal,
    OutOfDomain,
    BadRange,
    Infeasible,
    NegativeInput,
    EmptyResult,
    InputViolation,
    GridMismatch,
    GridTooCoarse,
    ParseError,
    SchemaError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// front ends can map error classes onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace symabs
