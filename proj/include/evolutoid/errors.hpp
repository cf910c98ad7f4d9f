#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evolutoid {

/// Every failure the library reports. The names double as the machine-readable
/// reason codes written to skip logs and reports.
enum class ErrorCode {
    OutOfDomain,
    RankDeficientChart,
    UnknownSurface,
    InvalidParams,
    InsufficientJetOrder,
    UmbilicPoint,
    ParabolicPoint,
    ParabolicDirection,
    AlphaOutOfRange,
    DegenerateDenominator,
    NotCurvatureLine,
    NoSolution,
    InadmissibleMonge,
    AssumptionViolated,
    RidgePoint,
    PreconditionViolated,
    HypothesesNotMet,
    SeedNotSingular,
    GradientVanished,
    NormalUndefined,
    AssertionFailure,
    ConfigError,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::RankDeficientChart: return "RankDeficientChart";
        case ErrorCode::UnknownSurface: return "UnknownSurface";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::InsufficientJetOrder: return "InsufficientJetOrder";
        case ErrorCode::UmbilicPoint: return "UmbilicPoint";
        case ErrorCode::ParabolicPoint: return "ParabolicPoint";
        case ErrorCode::ParabolicDirection: return "ParabolicDirection";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::NotCurvatureLine: return "NotCurvatureLine";
        case ErrorCode::NoSolution: return "NoSolution";
        case ErrorCode::InadmissibleMonge: return "InadmissibleMonge";
        case ErrorCode::AssumptionViolated: return "AssumptionViolated";
        case ErrorCode::RidgePoint: return "RidgePoint";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::HypothesesNotMet: return "HypothesesNotMet";
        case ErrorCode::SeedNotSingular: return "SeedNotSingular";
        case ErrorCode::GradientVanished: return "GradientVanished";
        case ErrorCode::NormalUndefined: return "NormalUndefined";
        case ErrorCode::AssertionFailure: return "AssertionFailure";
        case ErrorCode::ConfigError: return "ConfigError";
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

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace evolutoid
