#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace occtime {

enum class ErrorKind {
  NonSquare,
  NegativeEntry,
  ColumnSumExceedsOne,
  InvalidDistribution,
  InvalidStateSpace,
  InvalidSchedule,
  InvalidTargetSet,
  InvalidArgument,
  ScheduleExhausted,
  NonAbsorbing,
  NonTerminating,
  NegativeVariance,
  ParseError,
  UnknownMatrixName,
  InvalidTargetLabel,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so front ends can emit
// machine-parsable diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace occtime
