#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bandit_clt {

enum class ErrorKind {
  EmptyEnv,
  DuplicateOptimum,
  InvalidArm,
  InvalidConfig,
  ZeroCount,
  NotInitialized,
  HorizonTooShort,
  ZeroGap,
  EpsOutOfRange,
  DegenerateGap,
  ZeroProbability,
  NotTwoArmed,
  NotUCB,
  MissingHistory,
  DegenerateReference,
  DegenerateVariance,
  UnknownSuite,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyEnv: return "EmptyEnv";
    case ErrorKind::DuplicateOptimum: return "DuplicateOptimum";
    case ErrorKind::InvalidArm: return "InvalidArm";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ZeroCount: return "ZeroCount";
    case ErrorKind::NotInitialized: return "NotInitialized";
    case ErrorKind::HorizonTooShort: return "HorizonTooShort";
    case ErrorKind::ZeroGap: return "ZeroGap";
    case ErrorKind::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::NotTwoArmed: return "NotTwoArmed";
    case ErrorKind::NotUCB: return "NotUCB";
    case ErrorKind::MissingHistory: return "MissingHistory";
    case ErrorKind::DegenerateReference: return "DegenerateReference";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bandit_clt
