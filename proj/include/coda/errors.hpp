#ifndef CODA_ERRORS_HPP
#define CODA_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace coda {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
    InvalidArgument,
    NonPositivePart,
    DimensionMismatch,
    InvalidSelection,
    EmptyData,
    InsufficientData,
    DegenerateScale,
    DegenerateVariance,
    NotSPD,
    SingularCovariance,
    QuadratureUnstable,
    BadInterval,
    ParseError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for failures of numerical procedures (as opposed to bad input).
bool is_numerical(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositivePart: return "NonPositivePart";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidSelection: return "InvalidSelection";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateScale: return "DegenerateScale";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::QuadratureUnstable: return "QuadratureUnstable";
    case ErrorKind::BadInterval: return "BadInterval";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

inline bool is_numerical(ErrorKind kind) noexcept {
    return kind == ErrorKind::SingularCovariance || kind == ErrorKind::QuadratureUnstable;
}

} // namespace coda

#endif
