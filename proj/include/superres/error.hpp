#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace superres {

enum class ErrorKind {
  InvalidArgs,
  InvalidRatio,
  DuplicateNodes,
  DegenerateLayout,
  OverlappingIntervals,
  IncompatibleGrid,
  InsufficientSamples,
  DegenerateNoiseSpace,
  InfeasiblePacking,
  DegenerateLabels,
  GridTooLarge,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgs: return "InvalidArgs";
    case ErrorKind::InvalidRatio: return "InvalidRatio";
    case ErrorKind::DuplicateNodes: return "DuplicateNodes";
    case ErrorKind::DegenerateLayout: return "DegenerateLayout";
    case ErrorKind::OverlappingIntervals: return "OverlappingIntervals";
    case ErrorKind::IncompatibleGrid: return "IncompatibleGrid";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::DegenerateNoiseSpace: return "DegenerateNoiseSpace";
    case ErrorKind::InfeasiblePacking: return "InfeasiblePacking";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::GridTooLarge: return "GridTooLarge";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace detail
}  // namespace superres
