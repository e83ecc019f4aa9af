#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wva {

/// Failure categories raised by the library. Every thrown wva::Error carries
/// exactly one of these so callers (and tests) can branch on the kind rather
/// than on message text.
enum class ErrorKind {
  kInvalidArgument,
  kDivergentWeakValue,
  kResolution,
  kApproximationDomain,
  kEmptyIntensity,
  kUnsupportedExponent,
  kLength,
  kShape,
  kNoPeak,
  kUnderdeterminedFit,
  kDegenerateCalibration,
  kInsufficientData,
  kEmptyBand,
  kNormalization,
  kUsage,
  kFormat,
  kIo,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDivergentWeakValue: return "DivergentWeakValue";
    case ErrorKind::kResolution: return "ResolutionError";
    case ErrorKind::kApproximationDomain: return "ApproximationDomainError";
    case ErrorKind::kEmptyIntensity: return "EmptyIntensity";
    case ErrorKind::kUnsupportedExponent: return "UnsupportedExponent";
    case ErrorKind::kLength: return "LengthError";
    case ErrorKind::kShape: return "ShapeError";
    case ErrorKind::kNoPeak: return "NoPeak";
    case ErrorKind::kUnderdeterminedFit: return "UnderdeterminedFit";
    case ErrorKind::kDegenerateCalibration: return "DegenerateCalibration";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kEmptyBand: return "EmptyBand";
    case ErrorKind::kNormalization: return "NormalizationError";
    case ErrorKind::kUsage: return "UsageError";
    case ErrorKind::kFormat: return "FormatError";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

}  // namespace wva
