#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace udrs {

enum class ErrorCode {
  UnknownLabel,
  ParseError,
  DuplicateLabel,
  UnresolvedLabel,
  UnknownSort,
  LowerBoundViolation,
  SemilatticeViolation,
  ClauseEscape,
  NotPotentiallyScopeBearing,
  NoGroupReferent,
  NotSameClause,
  NotAPronoun,
  Inaccessible,
  NoLicensingCondition,
  WrongClause,
  NotLowerBound,
  PartialMapping,
  ReadingMismatch,
  UnboundReferent,
  EmptyAbstraction,
  TagMismatch,
  CoindexViolation,
  NotAClause,
  NoIsomorphism,
  UnresolvedPronoun,
  NotImplemented,
  InvalidArgument,
};

inline std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::UnresolvedLabel: return "UnresolvedLabel";
    case ErrorCode::UnknownSort: return "UnknownSort";
    case ErrorCode::LowerBoundViolation: return "LowerBoundViolation";
    case ErrorCode::SemilatticeViolation: return "SemilatticeViolation";
    case ErrorCode::ClauseEscape: return "ClauseEscape";
    case ErrorCode::NotPotentiallyScopeBearing: return "NotPotentiallyScopeBearing";
    case ErrorCode::NoGroupReferent: return "NoGroupReferent";
    case ErrorCode::NotSameClause: return "NotSameClause";
    case ErrorCode::NotAPronoun: return "NotAPronoun";
    case ErrorCode::Inaccessible: return "Inaccessible";
    case ErrorCode::NoLicensingCondition: return "NoLicensingCondition";
    case ErrorCode::WrongClause: return "WrongClause";
    case ErrorCode::NotLowerBound: return "NotLowerBound";
    case ErrorCode::PartialMapping: return "PartialMapping";
    case ErrorCode::ReadingMismatch: return "ReadingMismatch";
    case ErrorCode::UnboundReferent: return "UnboundReferent";
    case ErrorCode::EmptyAbstraction: return "EmptyAbstraction";
    case ErrorCode::TagMismatch: return "TagMismatch";
    case ErrorCode::CoindexViolation: return "CoindexViolation";
    case ErrorCode::NotAClause: return "NotAClause";
    case ErrorCode::NoIsomorphism: return "NoIsomorphism";
    case ErrorCode::UnresolvedPronoun: return "UnresolvedPronoun";
    case ErrorCode::NotImplemented: return "NotImplemented";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failing operation in the library throws this; the code is the
/// machine-readable part, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace udrs
