// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ramrec {

enum class ErrorCode {
  ParseError,
  DuplicateName,
  UnknownConstructor,
  UnknownDatatype,
  UnknownVariable,
  TypeMismatch,
  SideConditionCase,
  SideConditionFoldNormal,
  SideConditionToNorm,
  UninhabitedType,
  LevelViolation,
  NotHereditarilySequential,
  RepresentationError,
  StepBudgetExceeded,
  StuckState,
  Overflow,
  UnsupportedConstruct,
  GenerationFailure,
  IoError,
  UsageError,
  Internal,
};

inline std::string_view error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownConstructor: return "UnknownConstructor";
    case ErrorCode::UnknownDatatype: return "UnknownDatatype";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::SideConditionCase: return "SideConditionCase";
    case ErrorCode::SideConditionFoldNormal: return "SideConditionFoldNormal";
    case ErrorCode::SideConditionToNorm: return "SideConditionToNorm";
    case ErrorCode::UninhabitedType: return "UninhabitedType";
    case ErrorCode::LevelViolation: return "LevelViolation";
    case ErrorCode::NotHereditarilySequential: return "NotHereditarilySequential";
    case ErrorCode::RepresentationError: return "RepresentationError";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::StuckState: return "StuckState";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::GenerationFailure: return "GenerationFailure";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

// Errors attributable to the input (as opposed to a broken invariant).
inline bool is_user_error(ErrorCode c) {
  return c != ErrorCode::Internal && c != ErrorCode::StuckState;
}

struct SourcePos {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, SourcePos pos = {})
      : std::runtime_error(message), code_(code), pos_(pos) {}

  ErrorCode code() const noexcept { return code_; }
  SourcePos pos() const noexcept { return pos_; }

 private:
  ErrorCode code_;
  SourcePos pos_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message, SourcePos pos = {}) {
  throw Error(code, message, pos);
}

}  // namespace ramrec
