#pragma once

// Occupancy times of a target set R: the joint law p(a, n) of "a steps spent
// in R before time n, in state j at time n", the distribution of the lifetime
// occupancy tau_R, and its raw moments via a recurrence that never builds the
// joint table.
//
// All operations accept a start index: the chain is in distribution v at time
// `start`, and step n of the evolution uses B(start + n).

#include "occtime/chain.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace occtime {

class TargetSet {
 public:
  /// `members` are 0-based state indices; duplicates are ignored.
  TargetSet(std::size_t d, std::vector<std::size_t> members);

  static TargetSet all(std::size_t d);
  static TargetSet none(std::size_t d);

  std::size_t dimension() const noexcept { return mask_.size(); }
  const std::vector<std::size_t>& members() const noexcept { return members_; }
  bool contains(std::size_t state) const { return mask_.at(state); }
  bool empty() const noexcept { return members_.empty(); }
  /// Diagonal 0/1 matrix with ones at member positions.
  Matrix indicator() const;

  friend bool operator==(const TargetSet&, const TargetSet&) = default;

 private:
  std::vector<std::size_t> members_;
  std::vector<bool> mask_;
};

/// Dense triangular table of p(a, n) for 0 <= a <= n <= horizon.
class JointOccupancyTable {
 public:
  JointOccupancyTable(std::size_t dimension, std::size_t start);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t start() const noexcept { return start_; }
  /// Last n stored (the truncation point).
  std::size_t horizon() const noexcept { return rows_ == 0 ? 0 : rows_ - 1; }

  /// p(a, n); the zero vector when a > n.
  Vector at(std::size_t a, std::size_t n) const;
  /// sum over a and j of p_j(a, n).
  double mass(std::size_t n) const;

  /// Appends the row for the next n; `row` is d x (n+1), column a = p(a, n).
  void append_row(const Matrix& row);

 private:
  std::size_t offset(std::size_t a, std::size_t n) const {
    return (n * (n + 1) / 2 + a) * dimension_;
  }

  std::size_t dimension_;
  std::size_t start_;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

JointOccupancyTable evolve_joint(const EnvironmentSchedule& schedule,
                                 const InitialDistribution& initial, const TargetSet& target,
                                 std::size_t start = 0, const TruncationOptions& options = {});

struct OccupancyDistribution {
  /// probs[a] = P{tau_R = a}; trailing exact zeros are trimmed.
  std::vector<double> probs;
  /// Probability left unassigned by truncation.
  double tail_mass = 0.0;
  std::size_t horizon = 0;

  double probability(std::size_t a) const { return a < probs.size() ? probs[a] : 0.0; }
};

OccupancyDistribution occupancy_distribution(const EnvironmentSchedule& schedule,
                                             const InitialDistribution& initial,
                                             const TargetSet& target, std::size_t start = 0,
                                             const TruncationOptions& options = {});

/// m_k(n) for k = 0..order and n = 0..horizon. m_0(n) is the total surviving
/// mass vector, including the a = 0 term.
class MomentTable {
 public:
  MomentTable(std::size_t dimension, std::size_t order);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t order() const noexcept { return order_; }
  std::size_t horizon() const noexcept { return rows_ == 0 ? 0 : rows_ - 1; }

  Vector at(std::size_t k, std::size_t n) const;

  /// `row` is d x (order+1), column k = m_k(n).
  void append_row(const Matrix& row);

 private:
  std::size_t dimension_;
  std::size_t order_;
  std::size_t rows_ = 0;
  std::vector<double> values_;
};

MomentTable moment_tables(const EnvironmentSchedule& schedule, const InitialDistribution& initial,
                          const TargetSet& target, std::size_t start, std::size_t order,
                          const TruncationOptions& options = {});

struct OccupancyMoments {
  /// raw[k-1] = E[tau_R^k] for k = 1..order.
  std::vector<double> raw;
  double tail_mass = 0.0;
  std::size_t horizon = 0;

  double moment(std::size_t k) const { return raw.at(k - 1); }
};

/// Throws Error(InvalidArgument) when order == 0.
OccupancyMoments occupancy_moments(const EnvironmentSchedule& schedule,
                                   const InitialDistribution& initial, const TargetSet& target,
                                   std::size_t start, std::size_t order,
                                   const TruncationOptions& options = {});

struct SummaryStats {
  double mean = 0.0;
  double variance = 0.0;
  /// Empty when the mean is zero.
  std::optional<double> coefficient_of_variation;
};

/// Absolute slack on E[tau^2] - E[tau]^2 before it is reported as negative.
inline constexpr double kVarianceTolerance = 1e-12;

/// Throws Error(NegativeVariance) when E[tau^2] < E[tau]^2 - kVarianceTolerance.
SummaryStats summary_stats(double first_moment, double second_moment);

}  // namespace occtime
