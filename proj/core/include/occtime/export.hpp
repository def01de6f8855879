#pragma once

// CSV and JSON serialization of analysis results. Numbers carry 12
// significant digits and always show a decimal point or exponent, so 1 is
// written "1.0". CSV tables put metadata (tail mass, conventions) in
// trailing "key,value" rows after the data rows.

#include "occtime/chain.hpp"
#include "occtime/occupancy.hpp"
#include "occtime/random_environment.hpp"
#include "occtime/scenario.hpp"
#include "occtime/trajectory.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace occtime {

enum class Format { Csv, Json };

/// Throws Error(InvalidArgument) for anything but "csv" or "json".
Format parse_format(std::string_view name);

std::string format_number(double x);

/// Column sums and absorption vectors of every matrix in a scenario.
struct ValidationReport {
  StateSpace states;
  std::vector<NamedMatrix> matrices;
};

/// Raw moments plus mean, variance and CV when the order is at least 2.
struct MomentsReport {
  OccupancyMoments moments;
};

struct SimulationReport {
  EmpiricalSummary empirical;
  OccupancyDistribution analytic;
  double analytic_mean = 0.0;
  double tv_distance = 0.0;
  std::uint64_t seed = 0;
};

struct SweepTable {
  std::vector<std::string> condition_labels;
  std::vector<SweepPoint> points;
};

using ExportResult = std::variant<LifetimeDistribution, OccupancyDistribution, MomentsReport,
                                  TwoLevelStats, SweepTable, ValidationReport, SimulationReport>;

void export_results(const ExportResult& result, Format format, std::ostream& out);

/// Writes to `destination`, or to standard output when it is empty or "-".
/// Throws Error(IoError).
void export_results(const ExportResult& result, Format format, const std::string& destination);

}  // namespace occtime
