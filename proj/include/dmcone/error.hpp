#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dmcone {

enum class ErrorCode {
    // weights
    SumNotTwo,
    WeightOutOfRange,
    TooFewPoints,
    EmptySubset,
    // stratification / densities
    NotStable,
    NotKlt,
    // chern_bmy
    NonHomogeneous,
    UnsupportedStratum,
    // metric_lab
    NotPositiveDefinite,
    StepTooLarge,
    OutOfDomain,
    // periods
    ExponentOutOfRange,
    PunctureOnSegment,
    NonIntegrable,
    ToleranceNotMet,
    // io / cli
    ParseError,
    FileNotFound,
    UnknownCommand,
    BadFlag,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::SumNotTwo: return "SumNotTwo";
    case ErrorCode::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::NotStable: return "NotStable";
    case ErrorCode::NotKlt: return "NotKlt";
    case ErrorCode::NonHomogeneous: return "NonHomogeneous";
    case ErrorCode::UnsupportedStratum: return "UnsupportedStratum";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::PunctureOnSegment: return "PunctureOnSegment";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Base exception for every module. Carries one or more codes; validation can
/// fail for several independent reasons at once.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), codes_{code} {}

    Error(std::vector<ErrorCode> codes, const std::string& message)
        : std::runtime_error(join(codes) + ": " + message), codes_(std::move(codes)) {}

    ErrorCode code() const noexcept { return codes_.front(); }
    const std::vector<ErrorCode>& codes() const noexcept { return codes_; }

    bool has(ErrorCode c) const noexcept {
        for (auto x : codes_)
            if (x == c) return true;
        return false;
    }

private:
    static std::string join(const std::vector<ErrorCode>& codes) {
        std::string s;
        for (std::size_t i = 0; i < codes.size(); ++i) {
            if (i) s += "+";
            s += to_string(codes[i]);
        }
        return s;
    }

    std::vector<ErrorCode> codes_;
};

} // namespace dmcone
