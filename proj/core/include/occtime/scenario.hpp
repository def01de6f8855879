#pragma once

// Scenario files (JSON) and the embedded Southern Fulmar dataset.
//
// Schema, top-level keys:
//   states       list of distinct labels
//   orientation  optional: "column-stochastic-convention" (default, entry
//                [i][j] = P(j -> i)) or "row-stochastic-convention"
//   matrices     { name: [[...], ...], ... }
//   schedule     {"kind":"constant","matrix":name}
//                {"kind":"explicit","sequence":[names...],"extension":"hold_last"|"cycle"|"error"}
//                {"kind":"random","probabilities":{name:p,...},"length":n}
//   initial      list of d probabilities, a state label, or {label: p}
//   target_set   list of state labels
//   start, tail_tol, max_horizon   optional
//   description  optional free text

#include "occtime/chain.hpp"
#include "occtime/occupancy.hpp"
#include "occtime/random_environment.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace occtime {

struct NamedMatrix {
  std::string name;
  TransitionMatrix matrix;

  friend bool operator==(const NamedMatrix&, const NamedMatrix&) = default;
};

struct ConstantScheduleConfig {
  std::string matrix;
  friend bool operator==(const ConstantScheduleConfig&, const ConstantScheduleConfig&) = default;
};

struct ExplicitScheduleConfig {
  std::vector<std::string> sequence;
  Extension extension = Extension::HoldLast;
  friend bool operator==(const ExplicitScheduleConfig&, const ExplicitScheduleConfig&) = default;
};

struct RandomScheduleConfig {
  std::vector<std::pair<std::string, double>> probabilities;
  std::size_t length = 0;
  friend bool operator==(const RandomScheduleConfig&, const RandomScheduleConfig&) = default;
};

using ScheduleConfig =
    std::variant<ConstantScheduleConfig, ExplicitScheduleConfig, RandomScheduleConfig>;

/// A fully validated scenario. Matrices are stored in the column convention
/// whatever orientation the file used.
struct ScenarioConfig {
  StateSpace states;
  std::vector<NamedMatrix> matrices;
  ScheduleConfig schedule;
  InitialDistribution initial;
  TargetSet target;
  std::size_t start = 0;
  TruncationOptions truncation;
  std::string description;

  /// Throws Error(UnknownMatrixName).
  const TransitionMatrix& matrix(const std::string& name) const;
  bool is_random() const noexcept { return std::holds_alternative<RandomScheduleConfig>(schedule); }

  /// Throws Error(InvalidSchedule) for random schedules.
  EnvironmentSchedule deterministic_schedule() const;
  /// Throws Error(InvalidSchedule) for deterministic schedules.
  RandomEnvironmentSpec random_spec() const;
  /// One realization of a random schedule (its configured length, hold-last).
  EnvironmentSchedule sample_random_schedule(std::uint64_t seed) const;
  /// The deterministic schedule, or one seeded realization of a random one.
  EnvironmentSchedule schedule_for(std::uint64_t seed) const;

  /// Throws Error(InvalidTargetLabel).
  TargetSet target_from_labels(const std::vector<std::string>& labels) const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws Error(ParseError | UnknownMatrixName | InvalidDistribution |
/// InvalidTargetLabel | matrix validation kinds); messages name the field.
ScenarioConfig load_scenario(std::string_view text);
/// Reads a file, or the embedded dataset for the path "builtin:fulmar".
ScenarioConfig load_scenario_file(const std::string& path);
std::string serialize_scenario(const ScenarioConfig& config);

inline constexpr std::string_view kBuiltinFulmarPath = "builtin:fulmar";

/// The three ice-condition matrices, their decimals as printed, in the order
/// favourable, ordinary, unfavourable.
struct FulmarDecimals {
  std::string_view name;
  std::array<std::array<std::string_view, 4>, 4> rows;
};
const std::array<FulmarDecimals, 3>& fulmar_decimals();

struct FulmarDataset {
  StateSpace states;
  TransitionMatrix favourable;
  TransitionMatrix ordinary;
  TransitionMatrix unfavourable;
};

const FulmarDataset& builtin_fulmar();

/// Constant favourable conditions, started as a pre-breeder, targeting the
/// two breeding states.
ScenarioConfig fulmar_scenario();

}  // namespace occtime
