#include "occtime/chain.hpp"

#include "occtime/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>
#include <utility>

namespace occtime {

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw Error(ErrorKind::InvalidStateSpace, "state space must contain at least one state");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (label.empty()) {
      throw Error(ErrorKind::InvalidStateSpace, "state labels must be non-empty");
    }
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::InvalidStateSpace, "duplicate state label '" + label + "'");
    }
  }
}

StateSpace StateSpace::numbered(std::size_t d) {
  std::vector<std::string> labels;
  labels.reserve(d);
  for (std::size_t i = 1; i <= d; ++i) labels.push_back(std::to_string(i));
  return StateSpace(std::move(labels));
}

std::optional<std::size_t> StateSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

TransitionMatrix::TransitionMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    std::ostringstream msg;
    msg << "transition matrix must be square and non-empty, got " << entries_.rows() << "x"
        << entries_.cols();
    throw Error(ErrorKind::NonSquare, msg.str());
  }
  const Eigen::Index d = entries_.rows();
  absorption_.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double x = entries_(i, j);
      if (!(x >= 0.0) || !std::isfinite(x)) {
        std::ostringstream msg;
        msg << "entry (" << i + 1 << "," << j + 1 << ") = " << x << " is not a probability";
        throw Error(ErrorKind::NegativeEntry, msg.str());
      }
      sum += x;
    }
    if (sum > 1.0 + kValidationTolerance) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "column " << j + 1 << " sums to " << sum << " > 1";
      throw Error(ErrorKind::ColumnSumExceedsOne, msg.str());
    }
    absorption_(j) = std::max(0.0, 1.0 - sum);
  }
}

TransitionMatrix validate_matrix(const std::vector<std::vector<double>>& raw) {
  const std::size_t d = raw.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (raw[i].size() != d) {
      std::ostringstream msg;
      msg << "row " << i + 1 << " has " << raw[i].size() << " entries, expected " << d;
      throw Error(ErrorKind::NonSquare, msg.str());
    }
  }
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = raw[i][j];
  return TransitionMatrix(std::move(m));
}

TransitionMatrix validate_matrix(const Matrix& raw) { return TransitionMatrix(raw); }

Vector absorption_vector(const TransitionMatrix& b) { return b.absorption(); }

InitialDistribution::InitialDistribution(Vector probabilities) : probs_(std::move(probabilities)) {
  if (probs_.size() == 0) {
    throw Error(ErrorKind::InvalidDistribution, "initial distribution is empty");
  }
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    const double x = probs_(i);
    if (!(x >= 0.0 && x <= 1.0)) {
      std::ostringstream msg;
      msg << "initial probability " << i + 1 << " = " << x << " is outside [0,1]";
      throw Error(ErrorKind::InvalidDistribution, msg.str());
    }
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > kValidationTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "initial distribution sums to " << total << ", expected 1";
    throw Error(ErrorKind::InvalidDistribution, msg.str());
  }
}

InitialDistribution InitialDistribution::unit(std::size_t d, std::size_t state) {
  if (state >= d) {
    throw Error(ErrorKind::InvalidDistribution, "unit distribution state out of range");
  }
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(state)) = 1.0;
  return InitialDistribution(std::move(v));
}

EnvironmentSchedule::EnvironmentSchedule(ScheduleKind kind, std::vector<TransitionMatrix> matrices,
                                         std::vector<std::size_t> sequence, Extension extension)
    : kind_(kind),
      matrices_(std::move(matrices)),
      sequence_(std::move(sequence)),
      extension_(extension) {
  if (matrices_.empty()) {
    throw Error(ErrorKind::InvalidSchedule, "schedule needs at least one matrix");
  }
  if (sequence_.empty()) {
    throw Error(ErrorKind::InvalidSchedule, "schedule sequence must be non-empty");
  }
  const std::size_t d = matrices_.front().size();
  for (const auto& m : matrices_) {
    if (m.size() != d) {
      throw Error(ErrorKind::InvalidSchedule, "schedule matrices differ in dimension");
    }
  }
  for (std::size_t idx : sequence_) {
    if (idx >= matrices_.size()) {
      throw Error(ErrorKind::InvalidSchedule,
                  "schedule index " + std::to_string(idx) + " does not name a matrix");
    }
  }
}

EnvironmentSchedule EnvironmentSchedule::constant(TransitionMatrix matrix) {
  std::vector<TransitionMatrix> matrices;
  matrices.push_back(std::move(matrix));
  return EnvironmentSchedule(ScheduleKind::Constant, std::move(matrices), {0}, Extension::HoldLast);
}

EnvironmentSchedule EnvironmentSchedule::explicit_sequence(std::vector<TransitionMatrix> matrices,
                                                           std::vector<std::size_t> sequence,
                                                           Extension extension) {
  return EnvironmentSchedule(ScheduleKind::Explicit, std::move(matrices), std::move(sequence),
                             extension);
}

EnvironmentSchedule EnvironmentSchedule::periodic(std::vector<TransitionMatrix> matrices,
                                                  std::vector<std::size_t> sequence) {
  return EnvironmentSchedule(ScheduleKind::Periodic, std::move(matrices), std::move(sequence),
                             Extension::Cycle);
}

EnvironmentSchedule EnvironmentSchedule::from_matrices(const std::vector<TransitionMatrix>& steps,
                                                       Extension extension) {
  std::vector<std::size_t> sequence(steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) sequence[i] = i;
  return explicit_sequence(steps, std::move(sequence), extension);
}

const TransitionMatrix& EnvironmentSchedule::at(std::size_t n) const {
  const std::size_t len = sequence_.size();
  if (n < len) return matrices_[sequence_[n]];
  switch (extension_) {
    case Extension::HoldLast: return matrices_[sequence_.back()];
    case Extension::Cycle: return matrices_[sequence_[n % len]];
    case Extension::Error: break;
  }
  throw Error(ErrorKind::ScheduleExhausted, "schedule defines " + std::to_string(len) +
                                                " steps, B(" + std::to_string(n) +
                                                ") was requested");
}

Matrix transition_operator(const EnvironmentSchedule& schedule, std::size_t n, std::size_t m) {
  if (n < m) {
    throw Error(ErrorKind::InvalidArgument, "transition_operator requires n >= m");
  }
  const auto d = static_cast<Eigen::Index>(schedule.dimension());
  Matrix phi = Matrix::Identity(d, d);
  for (std::size_t k = m; k < n; ++k) phi = schedule.at(k).entries() * phi;
  return phi;
}

namespace detail {

void check_dimensions(const EnvironmentSchedule& schedule, const InitialDistribution& initial) {
  if (schedule.dimension() != initial.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "initial distribution has " + std::to_string(initial.size()) +
                    " states but the schedule has " + std::to_string(schedule.dimension()));
  }
}

void check_options(const TruncationOptions& options) {
  if (!(options.tail_tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tail_tol must be positive");
  }
  if (options.max_horizon == 0) {
    throw Error(ErrorKind::InvalidArgument, "max_horizon must be positive");
  }
}

void throw_non_absorbing(std::size_t max_horizon, double mass) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "surviving mass " << mass << " still exceeds tail_tol after max_horizon = "
      << max_horizon << " steps";
  throw Error(ErrorKind::NonAbsorbing, msg.str());
}

}  // namespace detail

LifetimeDistribution lifetime_distribution(const EnvironmentSchedule& schedule,
                                           const InitialDistribution& initial,
                                           const TruncationOptions& options, std::size_t start) {
  detail::check_dimensions(schedule, initial);
  detail::check_options(options);

  LifetimeDistribution out;
  out.probs.push_back(0.0);
  Vector w = initial.values();
  double mass = w.sum();
  std::size_t n = 0;
  while (mass >= options.tail_tol) {
    if (n == options.max_horizon) detail::throw_non_absorbing(options.max_horizon, mass);
    const TransitionMatrix& step = schedule.at(start + n);
    out.probs.push_back(step.absorption().dot(w));
    w = step.entries() * w;
    mass = w.sum();
    ++n;
  }
  out.horizon = n;
  out.tail_mass = mass;
  return out;
}

}  // namespace occtime
