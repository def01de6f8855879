#include "occtime/occupancy.hpp"

#include "occtime/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace occtime {

TargetSet::TargetSet(std::size_t d, std::vector<std::size_t> members) : mask_(d, false) {
  for (std::size_t m : members) {
    if (m >= d) {
      throw Error(ErrorKind::InvalidTargetSet, "target state " + std::to_string(m + 1) +
                                                   " outside state space of size " +
                                                   std::to_string(d));
    }
    mask_[m] = true;
  }
  for (std::size_t j = 0; j < d; ++j)
    if (mask_[j]) members_.push_back(j);
}

TargetSet TargetSet::all(std::size_t d) {
  std::vector<std::size_t> members(d);
  for (std::size_t j = 0; j < d; ++j) members[j] = j;
  return TargetSet(d, std::move(members));
}

TargetSet TargetSet::none(std::size_t d) { return TargetSet(d, {}); }

Matrix TargetSet::indicator() const {
  const auto d = static_cast<Eigen::Index>(mask_.size());
  Matrix r = Matrix::Zero(d, d);
  for (std::size_t j : members_) r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) = 1.0;
  return r;
}

JointOccupancyTable::JointOccupancyTable(std::size_t dimension, std::size_t start)
    : dimension_(dimension), start_(start) {}

Vector JointOccupancyTable::at(std::size_t a, std::size_t n) const {
  if (n >= rows_) {
    throw Error(ErrorKind::InvalidArgument,
                "joint table has no row n = " + std::to_string(n));
  }
  const auto d = static_cast<Eigen::Index>(dimension_);
  if (a > n) return Vector::Zero(d);
  return Eigen::Map<const Vector>(values_.data() + offset(a, n), d);
}

double JointOccupancyTable::mass(std::size_t n) const {
  if (n >= rows_) {
    throw Error(ErrorKind::InvalidArgument,
                "joint table has no row n = " + std::to_string(n));
  }
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(offset(0, n));
  const auto last = first + static_cast<std::ptrdiff_t>((n + 1) * dimension_);
  double total = 0.0;
  for (auto it = first; it != last; ++it) total += *it;
  return total;
}

void JointOccupancyTable::append_row(const Matrix& row) {
  const std::size_t n = rows_;
  if (static_cast<std::size_t>(row.rows()) != dimension_ ||
      static_cast<std::size_t>(row.cols()) != n + 1) {
    throw Error(ErrorKind::InvalidArgument, "joint table row has the wrong shape");
  }
  // Column-major storage already lays out p(0,n), p(1,n), ... contiguously.
  values_.insert(values_.end(), row.data(), row.data() + row.size());
  ++rows_;
}

namespace {

void check_target(const EnvironmentSchedule& schedule, const TargetSet& target) {
  if (target.dimension() != schedule.dimension()) {
    throw Error(ErrorKind::InvalidArgument, "target set dimension does not match the schedule");
  }
}

// Forms the pre-step arrangement y(a) = R p(a-1, n) + (Id - R) p(a, n) for
// a = 0..n+1 from the row p(., n) (d x (n+1)).
Matrix shift_target_rows(const Matrix& row, const TargetSet& target) {
  const Eigen::Index d = row.rows();
  const Eigen::Index width = row.cols();
  Matrix y(d, width + 1);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (target.contains(static_cast<std::size_t>(j))) {
      y(j, 0) = 0.0;
      y.row(j).tail(width) = row.row(j);
    } else {
      y.row(j).head(width) = row.row(j);
      y(j, width) = 0.0;
    }
  }
  return y;
}

// Iterates the joint law; `visit(n, row, y, step)` sees each row before the
// step from n to n+1 and `last(n, row)` sees the truncation row.
template <typename Visit, typename Last>
void iterate_joint(const EnvironmentSchedule& schedule, const InitialDistribution& initial,
                   const TargetSet& target, std::size_t start, const TruncationOptions& options,
                   Visit&& visit, Last&& last) {
  detail::check_dimensions(schedule, initial);
  detail::check_options(options);
  check_target(schedule, target);

  Matrix row = initial.values();
  double mass = row.sum();
  std::size_t n = 0;
  while (mass >= options.tail_tol) {
    if (n == options.max_horizon) detail::throw_non_absorbing(options.max_horizon, mass);
    const TransitionMatrix& step = schedule.at(start + n);
    Matrix y = shift_target_rows(row, target);
    visit(n, row, y, step);
    row = step.entries() * y;
    mass = row.sum();
    ++n;
  }
  last(n, row, mass);
}

std::vector<std::vector<double>> binomial_table(std::size_t order) {
  std::vector<std::vector<double>> c(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    c[k].assign(k + 1, 1.0);
    for (std::size_t j = 1; j < k; ++j) c[k][j] = c[k - 1][j - 1] + c[k - 1][j];
  }
  return c;
}

// Runs the moment recurrence; `visit(n, m, y, step)` sees m_.(n) and the
// pre-step combination y_k = m_k + R sum_j C(k,j) m_{k-j}.
template <typename Visit, typename Last>
void iterate_moments(const EnvironmentSchedule& schedule, const InitialDistribution& initial,
                     const TargetSet& target, std::size_t start, std::size_t order,
                     const TruncationOptions& options, Visit&& visit, Last&& last) {
  detail::check_dimensions(schedule, initial);
  detail::check_options(options);
  check_target(schedule, target);

  const auto d = static_cast<Eigen::Index>(schedule.dimension());
  const auto width = static_cast<Eigen::Index>(order + 1);
  const auto binom = binomial_table(order);
  Vector mask(d);
  for (Eigen::Index j = 0; j < d; ++j) mask(j) = target.contains(static_cast<std::size_t>(j)) ? 1.0 : 0.0;

  Matrix m = Matrix::Zero(d, width);
  m.col(0) = initial.values();
  double mass = m.col(0).sum();
  std::size_t n = 0;
  Matrix y(d, width);
  while (mass >= options.tail_tol) {
    if (n == options.max_horizon) detail::throw_non_absorbing(options.max_horizon, mass);
    const TransitionMatrix& step = schedule.at(start + n);
    y.col(0) = m.col(0);
    for (std::size_t k = 1; k <= order; ++k) {
      Vector acc = Vector::Zero(d);
      for (std::size_t j = 1; j <= k; ++j) acc += binom[k][j] * m.col(static_cast<Eigen::Index>(k - j));
      y.col(static_cast<Eigen::Index>(k)) = m.col(static_cast<Eigen::Index>(k)) + mask.cwiseProduct(acc);
    }
    visit(n, m, y, step);
    m = step.entries() * y;
    mass = m.col(0).sum();
    ++n;
  }
  last(n, m, mass);
}

}  // namespace

JointOccupancyTable evolve_joint(const EnvironmentSchedule& schedule,
                                 const InitialDistribution& initial, const TargetSet& target,
                                 std::size_t start, const TruncationOptions& options) {
  JointOccupancyTable table(schedule.dimension(), start);
  iterate_joint(
      schedule, initial, target, start, options,
      [&](std::size_t, const Matrix& row, const Matrix&, const TransitionMatrix&) {
        table.append_row(row);
      },
      [&](std::size_t, const Matrix& row, double) { table.append_row(row); });
  return table;
}

OccupancyDistribution occupancy_distribution(const EnvironmentSchedule& schedule,
                                             const InitialDistribution& initial,
                                             const TargetSet& target, std::size_t start,
                                             const TruncationOptions& options) {
  OccupancyDistribution out;
  iterate_joint(
      schedule, initial, target, start, options,
      [&](std::size_t n, const Matrix&, const Matrix& y, const TransitionMatrix& step) {
        // y has columns a = 0..n+1; contribution b(n)^T y(a) to P{tau = a}.
        if (out.probs.size() < n + 2) out.probs.resize(n + 2, 0.0);
        const Vector contrib = y.transpose() * step.absorption();
        for (std::size_t a = 0; a <= n + 1; ++a) out.probs[a] += contrib(static_cast<Eigen::Index>(a));
      },
      [&](std::size_t n, const Matrix&, double mass) {
        out.horizon = n;
        out.tail_mass = mass;
      });
  if (target.empty()) {
    // tau = 0 surely, including on the truncated tail.
    out.probs.assign(1, 1.0);
    out.tail_mass = 0.0;
  }
  while (!out.probs.empty() && out.probs.back() == 0.0) out.probs.pop_back();
  return out;
}

MomentTable::MomentTable(std::size_t dimension, std::size_t order)
    : dimension_(dimension), order_(order) {}

Vector MomentTable::at(std::size_t k, std::size_t n) const {
  if (k > order_ || n >= rows_) {
    throw Error(ErrorKind::InvalidArgument, "moment table index out of range");
  }
  const std::size_t off = (n * (order_ + 1) + k) * dimension_;
  return Eigen::Map<const Vector>(values_.data() + off, static_cast<Eigen::Index>(dimension_));
}

void MomentTable::append_row(const Matrix& row) {
  if (static_cast<std::size_t>(row.rows()) != dimension_ ||
      static_cast<std::size_t>(row.cols()) != order_ + 1) {
    throw Error(ErrorKind::InvalidArgument, "moment table row has the wrong shape");
  }
  values_.insert(values_.end(), row.data(), row.data() + row.size());
  ++rows_;
}

MomentTable moment_tables(const EnvironmentSchedule& schedule, const InitialDistribution& initial,
                          const TargetSet& target, std::size_t start, std::size_t order,
                          const TruncationOptions& options) {
  MomentTable table(schedule.dimension(), order);
  iterate_moments(
      schedule, initial, target, start, order, options,
      [&](std::size_t, const Matrix& m, const Matrix&, const TransitionMatrix&) {
        table.append_row(m);
      },
      [&](std::size_t, const Matrix& m, double) { table.append_row(m); });
  return table;
}

OccupancyMoments occupancy_moments(const EnvironmentSchedule& schedule,
                                   const InitialDistribution& initial, const TargetSet& target,
                                   std::size_t start, std::size_t order,
                                   const TruncationOptions& options) {
  if (order == 0) {
    throw Error(ErrorKind::InvalidArgument, "moment order must be at least 1");
  }
  OccupancyMoments out;
  out.raw.assign(order, 0.0);
  iterate_moments(
      schedule, initial, target, start, order, options,
      [&](std::size_t, const Matrix&, const Matrix& y, const TransitionMatrix& step) {
        const Vector& b = step.absorption();
        for (std::size_t k = 1; k <= order; ++k)
          out.raw[k - 1] += b.dot(y.col(static_cast<Eigen::Index>(k)));
      },
      [&](std::size_t n, const Matrix&, double mass) {
        out.horizon = n;
        out.tail_mass = mass;
      });
  return out;
}

SummaryStats summary_stats(double first_moment, double second_moment) {
  double variance = second_moment - first_moment * first_moment;
  if (variance < -kVarianceTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "E[tau^2] - E[tau]^2 = " << variance << " is negative; truncation is too loose";
    throw Error(ErrorKind::NegativeVariance, msg.str());
  }
  variance = std::max(0.0, variance);
  SummaryStats s;
  s.mean = first_moment;
  s.variance = variance;
  if (first_moment != 0.0) s.coefficient_of_variation = std::sqrt(variance) / first_moment;
  return s;
}

}  // namespace occtime
