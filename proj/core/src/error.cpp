#include "occtime/error.hpp"

namespace occtime {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::NegativeEntry: return "NegativeEntry";
    case ErrorKind::ColumnSumExceedsOne: return "ColumnSumExceedsOne";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::InvalidStateSpace: return "InvalidStateSpace";
    case ErrorKind::InvalidSchedule: return "InvalidSchedule";
    case ErrorKind::InvalidTargetSet: return "InvalidTargetSet";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ScheduleExhausted: return "ScheduleExhausted";
    case ErrorKind::NonAbsorbing: return "NonAbsorbing";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::NegativeVariance: return "NegativeVariance";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownMatrixName: return "UnknownMatrixName";
    case ErrorKind::InvalidTargetLabel: return "InvalidTargetLabel";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace occtime
