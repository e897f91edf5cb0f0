#pragma once

#include <stdexcept>
#include <string>

namespace cpishare {

/// Machine-checkable failure categories used across the library.
enum class Errc {
    InvalidArgument,

    // CSV ingestion / series construction
    MalformedRow,
    NonMonotoneDates,
    InteriorGap,
    DuplicateCode,
    NonFiniteValue,
    TooShort,
    EmptyIntersection,
    NonPositivePeak,

    // regression / search
    RankDeficient,
    InsufficientData,
    UnknownCode,
    MissingMonth,
    EmptyCatalog,
    NoFeasibleCandidate,

    // statistics
    InsufficientOverlap,
    DegenerateVariance,
    DegenerateSeries,

    // scenarios
    ZeroDenominator,
    NonPositivePrice,

    // synthetic data
    SpanTooShort,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::MalformedRow: return "MalformedRow";
        case Errc::NonMonotoneDates: return "NonMonotoneDates";
        case Errc::InteriorGap: return "InteriorGap";
        case Errc::DuplicateCode: return "DuplicateCode";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::TooShort: return "TooShort";
        case Errc::EmptyIntersection: return "EmptyIntersection";
        case Errc::NonPositivePeak: return "NonPositivePeak";
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::InsufficientData: return "InsufficientData";
        case Errc::UnknownCode: return "UnknownCode";
        case Errc::MissingMonth: return "MissingMonth";
        case Errc::EmptyCatalog: return "EmptyCatalog";
        case Errc::NoFeasibleCandidate: return "NoFeasibleCandidate";
        case Errc::InsufficientOverlap: return "InsufficientOverlap";
        case Errc::DegenerateVariance: return "DegenerateVariance";
        case Errc::DegenerateSeries: return "DegenerateSeries";
        case Errc::ZeroDenominator: return "ZeroDenominator";
        case Errc::NonPositivePrice: return "NonPositivePrice";
        case Errc::SpanTooShort: return "SpanTooShort";
    }
    return "Unknown";
}

/// Exception carrying an Errc so callers can branch on the failure kind.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace cpishare
