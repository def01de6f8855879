#pragma once

// Monte Carlo simulation of individual trajectories. This is an independent
// check on the exact engine: it samples states step by step and never touches
// the occupancy recurrences.

#include "occtime/chain.hpp"
#include "occtime/occupancy.hpp"
#include "occtime/seeding.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace occtime {

/// Hard cap on trajectory length before NonTerminating is raised.
inline constexpr std::size_t kMaxTrajectorySteps = 10'000'000;

struct TrajectoryOutcome {
  /// N: the step at which the individual entered the death state.
  std::size_t lifetime = 0;
  /// tau_R: number of k in 0..N-1 with X_k in R.
  std::size_t occupancy = 0;
  /// X_0..X_{N-1}; only filled when requested.
  std::vector<std::size_t> path;
};

TrajectoryOutcome simulate_trajectory(const EnvironmentSchedule& schedule,
                                      const InitialDistribution& initial, const TargetSet& target,
                                      std::size_t start, Rng& rng, bool record_path = false);

/// Empirical statistics of tau_R (and N) over a batch of trajectories. The
/// histograms are the whole state; every statistic is derived from them, so
/// merging is exact, associative and commutative.
class EmpiricalSummary {
 public:
  void add(const TrajectoryOutcome& outcome);
  void merge(const EmpiricalSummary& other);

  std::uint64_t n_samples() const noexcept { return n_samples_; }
  /// occupancy_histogram()[a] = number of trajectories with tau_R = a.
  const std::vector<std::uint64_t>& occupancy_histogram() const noexcept { return occupancy_; }
  /// lifetime_histogram()[n] = number of trajectories with N = n.
  const std::vector<std::uint64_t>& lifetime_histogram() const noexcept { return lifetime_; }

  double mean() const;
  /// Unbiased (n-1) sample variance; 0 for a single sample.
  double variance() const;
  double standard_error() const;
  double lifetime_mean() const;

  friend bool operator==(const EmpiricalSummary&, const EmpiricalSummary&) = default;

 private:
  std::uint64_t n_samples_ = 0;
  std::vector<std::uint64_t> occupancy_;
  std::vector<std::uint64_t> lifetime_;
};

/// Trajectory i draws from a stream seeded by derive_seed(seed, {i}), so the
/// result does not depend on `workers`.
EmpiricalSummary empirical_distribution(const EnvironmentSchedule& schedule,
                                        const InitialDistribution& initial,
                                        const TargetSet& target, std::size_t start,
                                        std::uint64_t n_samples, std::uint64_t seed,
                                        unsigned workers = 1);

/// Samples [first, last) of the trajectory index space; the building block of
/// empirical_distribution and of distributed runs.
EmpiricalSummary empirical_partition(const EnvironmentSchedule& schedule,
                                     const InitialDistribution& initial, const TargetSet& target,
                                     std::size_t start, std::uint64_t first, std::uint64_t last,
                                     std::uint64_t seed);

/// Total-variation distance between an empirical histogram and an exact
/// distribution. Unassigned exact mass (`tail_mass`) counts fully against.
double total_variation(const std::vector<std::uint64_t>& histogram,
                       const std::vector<double>& probs, double tail_mass = 0.0);

}  // namespace occtime
