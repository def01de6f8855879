#include "occtime/random_environment.hpp"

#include "occtime/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace occtime {

RandomEnvironmentSpec::RandomEnvironmentSpec(std::vector<EnvironmentCondition> conditions)
    : conditions_(std::move(conditions)) {
  if (conditions_.empty()) {
    throw Error(ErrorKind::InvalidSchedule, "random environment needs at least one condition");
  }
  const std::size_t d = conditions_.front().matrix.size();
  double total = 0.0;
  for (const auto& c : conditions_) {
    if (c.matrix.size() != d) {
      throw Error(ErrorKind::InvalidSchedule, "condition '" + c.label + "' has a different dimension");
    }
    if (!(c.probability >= 0.0 && c.probability <= 1.0)) {
      throw Error(ErrorKind::InvalidDistribution,
                  "condition '" + c.label + "' has probability outside [0,1]");
    }
    total += c.probability;
  }
  if (std::abs(total - 1.0) > kConditionProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "condition probabilities sum to " << total << ", expected 1";
    throw Error(ErrorKind::InvalidDistribution, msg.str());
  }
}

std::size_t RandomEnvironmentSpec::draw(Rng& rng) const {
  const double u = uniform01(rng);
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t c = 0; c < conditions_.size(); ++c) {
    const double p = conditions_[c].probability;
    if (p <= 0.0) continue;
    cum += p;
    last_positive = c;
    if (u < cum) return c;
  }
  return last_positive;
}

namespace {

std::vector<TransitionMatrix> condition_matrices(const RandomEnvironmentSpec& spec) {
  std::vector<TransitionMatrix> out;
  out.reserve(spec.conditions().size());
  for (const auto& c : spec.conditions()) out.push_back(c.matrix);
  return out;
}

std::vector<std::size_t> sample_sequence(const RandomEnvironmentSpec& spec, std::size_t length,
                                         Rng& rng) {
  std::vector<std::size_t> seq(length);
  for (auto& s : seq) s = spec.draw(rng);
  return seq;
}

// Runs `body(index)` for index in [0, count) on `workers` threads, rethrowing
// the failure with the lowest index.
template <typename Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::exception_ptr> errors(count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// Replays the stream with a doubled prefix whenever the engine reads past
// the sampled part. Draws are sequential, so a shorter prefix is always a
// prefix of the full-length sample and the result equals evaluating the full
// max_horizon-length sequence directly.
SequenceMoments sequence_moments(const RandomEnvironmentSpec& spec,
                                 const std::vector<TransitionMatrix>& matrices,
                                 const InitialDistribution& initial, const TargetSet& target,
                                 std::uint64_t stream_seed, const TruncationOptions& options,
                                 std::size_t start) {
  const std::size_t full = start + options.max_horizon;
  std::size_t length = std::min<std::size_t>(full, start + 512);
  for (;;) {
    Rng rng(stream_seed);
    auto schedule = EnvironmentSchedule::explicit_sequence(
        matrices, sample_sequence(spec, length, rng),
        length == full ? Extension::HoldLast : Extension::Error);
    try {
      const auto m = occupancy_moments(schedule, initial, target, start, 2, options);
      const auto s = summary_stats(m.moment(1), m.moment(2));
      return {s.mean, s.variance};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ScheduleExhausted) throw;
      length = std::min(full, length * 2);
    }
  }
}

}  // namespace

EnvironmentSchedule sample_schedule(const RandomEnvironmentSpec& spec, std::size_t length,
                                    Rng& rng) {
  if (length == 0) {
    throw Error(ErrorKind::InvalidArgument, "sampled schedule length must be at least 1");
  }
  return EnvironmentSchedule::explicit_sequence(condition_matrices(spec),
                                                sample_sequence(spec, length, rng),
                                                Extension::HoldLast);
}

TwoLevelStats aggregate_two_level(const std::vector<SequenceMoments>& per_sequence) {
  const std::size_t m = per_sequence.size();
  if (m < 2) {
    throw Error(ErrorKind::InvalidArgument, "two-level statistics need at least two sequences");
  }
  const double count = static_cast<double>(m);
  double sum_mean = 0.0, sum_var = 0.0, sum_second = 0.0;
  for (const auto& s : per_sequence) {
    sum_mean += s.mean;
    sum_var += s.variance;
    sum_second += s.variance + s.mean * s.mean;
  }
  TwoLevelStats out;
  out.n_sequences = m;
  out.mean_of_means = sum_mean / count;
  out.mean_within_variance = sum_var / count;
  double ss = 0.0;
  for (const auto& s : per_sequence) {
    const double dev = s.mean - out.mean_of_means;
    ss += dev * dev;
  }
  out.between_variance = ss / count;
  out.total_variance = sum_second / count - out.mean_of_means * out.mean_of_means;
  if (out.mean_of_means != 0.0)
    out.coefficient_of_variation = std::sqrt(std::max(0.0, out.total_variance)) / out.mean_of_means;
  return out;
}

TwoLevelStats two_level_stats(const RandomEnvironmentSpec& spec, const InitialDistribution& initial,
                              const TargetSet& target, std::size_t n_sequences, std::uint64_t seed,
                              const TruncationOptions& options, std::size_t start,
                              unsigned workers) {
  if (n_sequences < 2) {
    throw Error(ErrorKind::InvalidArgument, "two-level statistics need M >= 2 sequences");
  }
  detail::check_options(options);
  const auto matrices = condition_matrices(spec);
  std::vector<SequenceMoments> per_sequence(n_sequences);
  parallel_for(n_sequences, workers, [&](std::size_t i) {
    try {
      per_sequence[i] = sequence_moments(spec, matrices, initial, target,
                                         derive_seed(seed, {i}), options, start);
    } catch (const Error& e) {
      throw Error(e.kind(), "sequence " + std::to_string(i) + ": " + e.what());
    }
  });
  return aggregate_two_level(per_sequence);
}

std::vector<SweepPoint> simplex_sweep(const std::vector<EnvironmentCondition>& conditions,
                                      double grid_step, const InitialDistribution& initial,
                                      const TargetSet& target, std::size_t n_sequences,
                                      std::uint64_t seed, const TruncationOptions& options,
                                      std::size_t start, unsigned workers) {
  if (conditions.size() != 3) {
    throw Error(ErrorKind::InvalidArgument, "simplex sweep needs exactly three conditions, got " +
                                                std::to_string(conditions.size()));
  }
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "grid_step must lie in (0, 1]");
  }
  const double ratio = 1.0 / grid_step;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::abs(static_cast<double>(steps) * grid_step - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "grid_step must divide 1");
  }

  std::vector<SweepPoint> points;
  points.reserve(simplex_point_count(steps));
  for (std::size_t i = 0; i <= steps; ++i) {
    for (std::size_t j = 0; i + j <= steps; ++j) {
      SweepPoint p;
      p.i = i;
      p.j = j;
      const std::size_t k = steps - i - j;
      const double s = static_cast<double>(steps);
      p.probabilities = {static_cast<double>(i) / s, static_cast<double>(j) / s,
                         static_cast<double>(k) / s};
      points.push_back(std::move(p));
    }
  }

  parallel_for(points.size(), workers, [&](std::size_t idx) {
    SweepPoint& p = points[idx];
    try {
      std::vector<EnvironmentCondition> at_point = conditions;
      for (std::size_t c = 0; c < 3; ++c) at_point[c].probability = p.probabilities[c];
      RandomEnvironmentSpec spec(std::move(at_point));
      p.stats = two_level_stats(spec, initial, target, n_sequences, derive_seed(seed, {p.i, p.j}),
                                options, start, 1);
    } catch (const Error& e) {
      p.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
  });
  return points;
}

}  // namespace occtime
