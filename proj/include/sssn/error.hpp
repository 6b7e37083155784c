#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sssn {

enum class ErrorCode {
    InvalidSplit,
    InsufficientSample,
    DimensionMismatch,
    DegenerateSeries,
    IndexError,
    InvalidArgument,
    UnsupportedLevel,
    NotPositiveDefinite,
    InvalidPreset,
    IoError,
    FormatError,
    ParseError,
    ConfigError,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidSplit: return "InvalidSplit";
        case ErrorCode::InsufficientSample: return "InsufficientSample";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateSeries: return "DegenerateSeries";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::UnsupportedLevel: return "UnsupportedLevel";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::InvalidPreset: return "InvalidPreset";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Statistical errors are the ones a well-formed input can still trigger
/// (too short, constant after projection); the CLI maps them to exit code 2.
[[nodiscard]] constexpr bool is_statistical(ErrorCode code) noexcept {
    return code == ErrorCode::InsufficientSample || code == ErrorCode::DegenerateSeries;
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sssn
