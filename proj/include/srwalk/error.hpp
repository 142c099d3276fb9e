#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srw {

enum class ErrorKind {
  MalformedDocument,
  UnknownStepKey,
  ProbabilityOutOfRange,
  FaceSumMismatch,
  SupportViolation,
  InvalidArgument,
  NonpositiveArgument,
  NoRoot,
  CrossCheckFailed,
  NotStructureReversible,
  NotHomogeneous,
  NotStationary,
  NotApplicable,
  BothConstantsZero,
  ZeroMass,
  NotConverged,
  WindowMismatch,
  DegenerateRouting,
  NegativeProbability,
  InvalidParameters,
  UnknownInstance,
};

constexpr std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedDocument: return "MalformedDocument";
    case ErrorKind::UnknownStepKey: return "UnknownStepKey";
    case ErrorKind::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorKind::FaceSumMismatch: return "FaceSumMismatch";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonpositiveArgument: return "NonpositiveArgument";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::CrossCheckFailed: return "CrossCheckFailed";
    case ErrorKind::NotStructureReversible: return "NotStructureReversible";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::NotStationary: return "NotStationary";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::BothConstantsZero: return "BothConstantsZero";
    case ErrorKind::ZeroMass: return "ZeroMass";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::WindowMismatch: return "WindowMismatch";
    case ErrorKind::DegenerateRouting: return "DegenerateRouting";
    case ErrorKind::NegativeProbability: return "NegativeProbability";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::UnknownInstance: return "UnknownInstance";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The kind is
/// stable and machine-readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace srw
