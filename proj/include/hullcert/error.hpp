#ifndef HULLCERT_ERROR_HPP
#define HULLCERT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hullcert {

enum class ErrorKind {
    DegenerateTrainingSet,
    DimensionMismatch,
    NonConvergence,
    EmptyInput,
    InvalidDistribution,
    MissingClass,
    DegenerateDenominator,
    LengthMismatch,
    ZeroVariance,
    SingleGroup,
    InsufficientSamples,
    InvalidFraction,
    MalformedFile,
    NonFiniteValue,
    IoFailure,
    InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DegenerateTrainingSet: return "DegenerateTrainingSet";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::MissingClass: return "MissingClass";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::SingleGroup: return "SingleGroup";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::InvalidFraction: return "InvalidFraction";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown when the projection solver hits its iteration cap; keeps the best
/// distance seen so the caller can decide what to do with it.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double best_distance, double gap)
        : Error(ErrorKind::NonConvergence, what), best_distance_(best_distance), gap_(gap) {}

    double best_distance() const noexcept { return best_distance_; }
    double gap() const noexcept { return gap_; }

private:
    double best_distance_;
    double gap_;
};

} // namespace hullcert

#endif
