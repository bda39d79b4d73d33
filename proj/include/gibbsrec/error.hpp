#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gibbsrec {

enum class ErrorKind {
  NotHermitian,
  NotTraceOne,
  NotPositive,
  NotNormalized,
  DimensionMismatch,
  LengthMismatch,
  DimensionTooSmall,
  EpsilonOutOfRange,
  NotFullRange,
  InvalidArgument,
  Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotTraceOne: return "NotTraceOne";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorKind::NotFullRange: return "NotFullRange";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
  /// The description without the kind prefix.
  [[nodiscard]] const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace gibbsrec
