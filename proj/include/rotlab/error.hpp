#pragma once

#include <stdexcept>
#include <string>

namespace rotlab {

enum class ErrorCode {
    OutsideDisk,
    DegenerateEndpoints,
    NotLoxodromic,
    GenusTooSmall,
    ReductionStalled,
    DimensionMismatch,
    BudgetExceeded,
    CatalogInsufficient,
    InvalidPush,
    StepBlowup,
    UnknownScenario,
    NoEscape,
    CoincidentLimits,
    DegenerateSlope,
    NumericalOverflow,
    ConfigInvalid,
    Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::OutsideDisk: return "OutsideDisk";
    case ErrorCode::DegenerateEndpoints: return "DegenerateEndpoints";
    case ErrorCode::NotLoxodromic: return "NotLoxodromic";
    case ErrorCode::GenusTooSmall: return "GenusTooSmall";
    case ErrorCode::ReductionStalled: return "ReductionStalled";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::CatalogInsufficient: return "CatalogInsufficient";
    case ErrorCode::InvalidPush: return "InvalidPush";
    case ErrorCode::StepBlowup: return "StepBlowup";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::NoEscape: return "NoEscape";
    case ErrorCode::CoincidentLimits: return "CoincidentLimits";
    case ErrorCode::DegenerateSlope: return "DegenerateSlope";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace rotlab
