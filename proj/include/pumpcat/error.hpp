// error.hpp: exception type shared by every pumpcat module.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pumpcat {

enum class ErrorCode {
    DegenerateCat,
    NegativeTime,
    ThermalNotSupported,
    ZeroAmplitude,
    NonHermitianState,
    ZeroProbabilityBranch,
    OutsideCatManifold,
    TruncationTooSmall,
    StepTooLarge,
    DimMismatch,
    InconsistentState,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DegenerateCat: return "DegenerateCat";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::ThermalNotSupported: return "ThermalNotSupported";
    case ErrorCode::ZeroAmplitude: return "ZeroAmplitude";
    case ErrorCode::NonHermitianState: return "NonHermitianState";
    case ErrorCode::ZeroProbabilityBranch: return "ZeroProbabilityBranch";
    case ErrorCode::OutsideCatManifold: return "OutsideCatManifold";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InconsistentState: return "InconsistentState";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace pumpcat
