#pragma once

// Randomly varying environments: each step's matrix is drawn independently
// from a fixed list of conditions. Statistics are reported at two levels,
// within a sampled environment sequence and between sequences.

#include "occtime/chain.hpp"
#include "occtime/occupancy.hpp"
#include "occtime/seeding.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace occtime {

struct EnvironmentCondition {
  std::string label;
  TransitionMatrix matrix;
  double probability;
};

/// Slack on the condition probabilities summing to one.
inline constexpr double kConditionProbabilityTolerance = 1e-12;

class RandomEnvironmentSpec {
 public:
  /// Throws Error(InvalidDistribution) for negative probabilities or a total
  /// away from 1, Error(InvalidSchedule) for empty or mismatched matrices.
  explicit RandomEnvironmentSpec(std::vector<EnvironmentCondition> conditions);

  const std::vector<EnvironmentCondition>& conditions() const noexcept { return conditions_; }
  std::size_t dimension() const noexcept { return conditions_.front().matrix.size(); }

  /// Categorical draw over conditions by cumulative inversion.
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<EnvironmentCondition> conditions_;
};

/// i.i.d. sequence of `length` conditions; holds the last one beyond it.
EnvironmentSchedule sample_schedule(const RandomEnvironmentSpec& spec, std::size_t length,
                                    Rng& rng);

struct TwoLevelStats {
  std::size_t n_sequences = 0;
  /// Mean over sequences of the per-sequence expected occupancy.
  double mean_of_means = 0.0;
  /// Mean over sequences of the per-sequence variance.
  double mean_within_variance = 0.0;
  /// Population (divide-by-M) variance of the per-sequence means.
  double between_variance = 0.0;
  /// mean(var_i + e_i^2) - mean(e_i)^2.
  double total_variance = 0.0;
  std::optional<double> coefficient_of_variation;
};

/// Per-sequence first two moments, in sequence-index order.
struct SequenceMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Aggregates per-sequence moments into two-level statistics.
/// Throws Error(InvalidArgument) for fewer than two sequences.
TwoLevelStats aggregate_two_level(const std::vector<SequenceMoments>& per_sequence);

/// Samples M environment sequences (sequence i seeded by
/// derive_seed(seed, {i})) to length max_horizon and evaluates the exact
/// occupancy moments on each. Throws Error(InvalidArgument) when M < 2; a
/// NonAbsorbing sequence is reported with its index.
TwoLevelStats two_level_stats(const RandomEnvironmentSpec& spec, const InitialDistribution& initial,
                              const TargetSet& target, std::size_t n_sequences, std::uint64_t seed,
                              const TruncationOptions& options = {}, std::size_t start = 0,
                              unsigned workers = 1);

struct SweepPoint {
  /// Step counts along the first two conditions; the third is the rest.
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<double> probabilities;
  std::optional<TwoLevelStats> stats;
  /// Diagnostic for a point that failed; empty on success.
  std::string error;
};

/// Number of grid points for a step of 1/steps over the 3-simplex.
constexpr std::size_t simplex_point_count(std::size_t steps) noexcept {
  return (steps + 1) * (steps + 2) / 2;
}

/// Evaluates two_level_stats at every point of the grid with spacing
/// `grid_step` over the probabilities of exactly three conditions. The
/// point (i, j) uses seed derive_seed(seed, {i, j}). Failures at a point are
/// recorded in SweepPoint::error without aborting the sweep.
std::vector<SweepPoint> simplex_sweep(const std::vector<EnvironmentCondition>& conditions,
                                      double grid_step, const InitialDistribution& initial,
                                      const TargetSet& target, std::size_t n_sequences,
                                      std::uint64_t seed, const TruncationOptions& options = {},
                                      std::size_t start = 0, unsigned workers = 1);

}  // namespace occtime
