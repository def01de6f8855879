#include "occtime/trajectory.hpp"

#include "occtime/error.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace occtime {

namespace {

std::size_t sample_initial(const Vector& v, double u) {
  const auto d = static_cast<std::size_t>(v.size());
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < d; ++j) {
    const double p = v(static_cast<Eigen::Index>(j));
    if (p <= 0.0) continue;
    cum += p;
    last_positive = j;
    if (u < cum) return j;
  }
  // u beyond the rounded total.
  return last_positive;
}

// Returns the next state, or d for death. Intervals are laid out as
// B_0j, ..., B_{d-1,j}, b_j.
std::size_t sample_step(const TransitionMatrix& step, std::size_t from, double u) {
  const std::size_t d = step.size();
  double cum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    cum += step(i, from);
    if (u < cum) return i;
  }
  return d;
}

}  // namespace

TrajectoryOutcome simulate_trajectory(const EnvironmentSchedule& schedule,
                                      const InitialDistribution& initial, const TargetSet& target,
                                      std::size_t start, Rng& rng, bool record_path) {
  detail::check_dimensions(schedule, initial);
  if (target.dimension() != schedule.dimension()) {
    throw Error(ErrorKind::InvalidArgument, "target set dimension does not match the schedule");
  }
  const std::size_t d = schedule.dimension();
  TrajectoryOutcome out;
  std::size_t state = sample_initial(initial.values(), uniform01(rng));
  for (std::size_t n = 0;; ++n) {
    if (n == kMaxTrajectorySteps) {
      throw Error(ErrorKind::NonTerminating,
                  "trajectory still alive after " + std::to_string(kMaxTrajectorySteps) + " steps");
    }
    if (record_path) out.path.push_back(state);
    if (target.contains(state)) ++out.occupancy;
    const std::size_t next = sample_step(schedule.at(start + n), state, uniform01(rng));
    if (next == d) {
      out.lifetime = n + 1;
      return out;
    }
    state = next;
  }
}

void EmpiricalSummary::add(const TrajectoryOutcome& outcome) {
  if (occupancy_.size() <= outcome.occupancy) occupancy_.resize(outcome.occupancy + 1, 0);
  if (lifetime_.size() <= outcome.lifetime) lifetime_.resize(outcome.lifetime + 1, 0);
  ++occupancy_[outcome.occupancy];
  ++lifetime_[outcome.lifetime];
  ++n_samples_;
}

void EmpiricalSummary::merge(const EmpiricalSummary& other) {
  auto add_into = [](std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
    if (into.size() < from.size()) into.resize(from.size(), 0);
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
  };
  add_into(occupancy_, other.occupancy_);
  add_into(lifetime_, other.lifetime_);
  n_samples_ += other.n_samples_;
}

namespace {

double histogram_mean(const std::vector<std::uint64_t>& h, std::uint64_t n) {
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < h.size(); ++a) sum += static_cast<double>(a) * static_cast<double>(h[a]);
  return sum / static_cast<double>(n);
}

}  // namespace

double EmpiricalSummary::mean() const { return histogram_mean(occupancy_, n_samples_); }

double EmpiricalSummary::lifetime_mean() const { return histogram_mean(lifetime_, n_samples_); }

double EmpiricalSummary::variance() const {
  if (n_samples_ < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (std::size_t a = 0; a < occupancy_.size(); ++a) {
    const double dev = static_cast<double>(a) - m;
    ss += dev * dev * static_cast<double>(occupancy_[a]);
  }
  return ss / static_cast<double>(n_samples_ - 1);
}

double EmpiricalSummary::standard_error() const {
  if (n_samples_ == 0) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n_samples_));
}

EmpiricalSummary empirical_partition(const EnvironmentSchedule& schedule,
                                     const InitialDistribution& initial, const TargetSet& target,
                                     std::size_t start, std::uint64_t first, std::uint64_t last,
                                     std::uint64_t seed) {
  EmpiricalSummary summary;
  for (std::uint64_t i = first; i < last; ++i) {
    Rng rng(derive_seed(seed, {i}));
    summary.add(simulate_trajectory(schedule, initial, target, start, rng));
  }
  return summary;
}

EmpiricalSummary empirical_distribution(const EnvironmentSchedule& schedule,
                                        const InitialDistribution& initial,
                                        const TargetSet& target, std::size_t start,
                                        std::uint64_t n_samples, std::uint64_t seed,
                                        unsigned workers) {
  if (n_samples == 0) {
    throw Error(ErrorKind::InvalidArgument, "n_samples must be at least 1");
  }
  workers = std::max(1u, workers);
  if (workers > n_samples) workers = static_cast<unsigned>(n_samples);
  if (workers == 1) return empirical_partition(schedule, initial, target, start, 0, n_samples, seed);

  std::vector<EmpiricalSummary> parts(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t first = n_samples * w / workers;
    const std::uint64_t last = n_samples * (w + 1) / workers;
    threads.emplace_back([&, w, first, last] {
      try {
        parts[w] = empirical_partition(schedule, initial, target, start, first, last, seed);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  EmpiricalSummary total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

double total_variation(const std::vector<std::uint64_t>& histogram,
                       const std::vector<double>& probs, double tail_mass) {
  std::uint64_t n = 0;
  for (auto c : histogram) n += c;
  const std::size_t len = std::max(histogram.size(), probs.size());
  double sum = 0.0;
  for (std::size_t a = 0; a < len; ++a) {
    const double emp = a < histogram.size() && n > 0
                           ? static_cast<double>(histogram[a]) / static_cast<double>(n)
                           : 0.0;
    const double exact = a < probs.size() ? probs[a] : 0.0;
    sum += std::abs(emp - exact);
  }
  return 0.5 * (sum + tail_mass);
}

}  // namespace occtime
