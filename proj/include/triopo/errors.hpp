#pragma once

#include <stdexcept>
#include <string>

namespace triopo {

enum class ErrorCode {
  InvalidParams,
  AtThreshold,
  AsymmetricPumps,
  WrongBranch,
  Unstable,
  MixedDecay,
  DegenerateInference,
  AllDiverged,
  InsufficientData,
  BadConfig,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::AtThreshold: return "AtThreshold";
    case ErrorCode::AsymmetricPumps: return "AsymmetricPumps";
    case ErrorCode::WrongBranch: return "WrongBranch";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::MixedDecay: return "MixedDecay";
    case ErrorCode::DegenerateInference: return "DegenerateInference";
    case ErrorCode::AllDiverged: return "AllDiverged";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace triopo
