#pragma once

// Validated building blocks of an inhomogeneous absorbing Markov chain: the
// transient state space, column-substochastic transition matrices, initial
// distributions, environment schedules and the lifetime distribution.
//
// Orientation: entry (i, j) of a transition matrix is the probability of
// moving from state j to state i in one step, so distributions are column
// vectors propagated as w(n+1) = B(n) w(n). The death state is never stored;
// its one-step probabilities form the absorption vector b = 1 - colsum(B).

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace occtime {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Slack allowed on column sums and distribution totals during validation.
inline constexpr double kValidationTolerance = 1e-9;

class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);

  /// Labels "1".."d".
  static StateSpace numbered(std::size_t d);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> index_of(const std::string& label) const;

  friend bool operator==(const StateSpace&, const StateSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

class TransitionMatrix {
 public:
  /// Throws Error(NegativeEntry | ColumnSumExceedsOne) on invalid input.
  explicit TransitionMatrix(Matrix entries);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const noexcept { return entries_; }
  double operator()(std::size_t to, std::size_t from) const {
    return entries_(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
  }
  Vector column_sums() const { return entries_.colwise().sum().transpose(); }
  /// b_j = 1 - sum_i B_ij, clamped at zero inside the validation slack.
  const Vector& absorption() const noexcept { return absorption_; }

  friend bool operator==(const TransitionMatrix& a, const TransitionMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
  Vector absorption_;
};

/// Validates a raw row-major array; raw[i][j] = P(j -> i).
/// Throws Error(NonSquare | NegativeEntry | ColumnSumExceedsOne).
TransitionMatrix validate_matrix(const std::vector<std::vector<double>>& raw);
TransitionMatrix validate_matrix(const Matrix& raw);

/// Per-state death probabilities for one step of B.
Vector absorption_vector(const TransitionMatrix& b);

class InitialDistribution {
 public:
  /// Throws Error(InvalidDistribution).
  explicit InitialDistribution(Vector probabilities);

  /// Point mass on `state`.
  static InitialDistribution unit(std::size_t d, std::size_t state);

  std::size_t size() const noexcept { return static_cast<std::size_t>(probs_.size()); }
  const Vector& values() const noexcept { return probs_; }

  friend bool operator==(const InitialDistribution& a, const InitialDistribution& b) {
    return a.probs_.size() == b.probs_.size() && a.probs_ == b.probs_;
  }

 private:
  Vector probs_;
};

/// What an explicit schedule does past its last listed step.
enum class Extension { HoldLast, Cycle, Error };

enum class ScheduleKind { Constant, Explicit, Periodic };

/// A rule assigning a transition matrix B(n) to every time index n >= 0.
class EnvironmentSchedule {
 public:
  static EnvironmentSchedule constant(TransitionMatrix matrix);
  /// `sequence` indexes into `matrices`; it must be non-empty.
  static EnvironmentSchedule explicit_sequence(std::vector<TransitionMatrix> matrices,
                                               std::vector<std::size_t> sequence,
                                               Extension extension = Extension::HoldLast);
  static EnvironmentSchedule periodic(std::vector<TransitionMatrix> matrices,
                                      std::vector<std::size_t> sequence);
  /// Convenience: one matrix per listed step.
  static EnvironmentSchedule from_matrices(const std::vector<TransitionMatrix>& steps,
                                           Extension extension = Extension::HoldLast);

  ScheduleKind kind() const noexcept { return kind_; }
  Extension extension() const noexcept { return extension_; }
  std::size_t dimension() const noexcept { return matrices_.front().size(); }
  const std::vector<TransitionMatrix>& matrices() const noexcept { return matrices_; }
  const std::vector<std::size_t>& sequence() const noexcept { return sequence_; }

  /// B(n). Throws Error(ScheduleExhausted) past the prefix of an
  /// Extension::Error schedule.
  const TransitionMatrix& at(std::size_t n) const;

 private:
  EnvironmentSchedule(ScheduleKind kind, std::vector<TransitionMatrix> matrices,
                      std::vector<std::size_t> sequence, Extension extension);

  ScheduleKind kind_;
  std::vector<TransitionMatrix> matrices_;
  std::vector<std::size_t> sequence_;
  Extension extension_;
};

/// Phi(n, m) = B(n-1) ... B(m); the identity when n == m.
Matrix transition_operator(const EnvironmentSchedule& schedule, std::size_t n, std::size_t m);

struct TruncationOptions {
  /// Iteration stops once the surviving mass drops below this.
  double tail_tol = 1e-12;
  /// Hard cap on the number of steps; reaching it signals NonAbsorbing.
  std::size_t max_horizon = 100000;

  friend bool operator==(const TruncationOptions&, const TruncationOptions&) = default;
};

/// Distribution of the absorption time N of a chain started at `start`.
struct LifetimeDistribution {
  /// probs[n] = P{N = n}; probs[0] is always 0.
  std::vector<double> probs;
  /// Surviving mass after `horizon` steps, i.e. P{N > horizon}.
  double tail_mass = 0.0;
  std::size_t horizon = 0;

  double probability(std::size_t n) const { return n < probs.size() ? probs[n] : 0.0; }
};

/// Throws Error(NonAbsorbing) when the surviving mass is still >= tail_tol
/// after max_horizon steps.
LifetimeDistribution lifetime_distribution(const EnvironmentSchedule& schedule,
                                           const InitialDistribution& initial,
                                           const TruncationOptions& options = {},
                                           std::size_t start = 0);

namespace detail {
void check_dimensions(const EnvironmentSchedule& schedule, const InitialDistribution& initial);
void check_options(const TruncationOptions& options);
[[noreturn]] void throw_non_absorbing(std::size_t max_horizon, double mass);
}  // namespace detail

}  // namespace occtime
