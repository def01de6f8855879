#pragma once

// Test-only oracles. None of these call the occupancy engine: they work from
// raw step matrices with plain loops so they stay independent of the
// recurrences under test.

#include "occtime/chain.hpp"

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

namespace occtime::testing {

using RawMatrix = std::vector<std::vector<double>>;  // raw[i][j] = P(j -> i)

inline double column_deficit(const RawMatrix& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += b[i][j];
  return 1.0 - s;
}

/// Distribution and raw moments of the lifetime occupancy time obtained by
/// enumerating every path X_0..X_{N-1} followed by death.
struct EnumeratedOccupancy {
  std::vector<double> probs;  // probs[a] = P{tau = a}
  double first_moment = 0.0;
  double second_moment = 0.0;
  double total = 0.0;         // total probability enumerated
};

/// steps[n] is B(n) for n < steps.size(); the last step must kill every
/// state (zero matrix) so enumeration terminates. `target[j]` marks R.
inline EnumeratedOccupancy enumerate_paths(const std::vector<RawMatrix>& steps,
                                           const std::vector<double>& v,
                                           const std::vector<bool>& target) {
  const std::size_t d = v.size();
  EnumeratedOccupancy out;
  out.probs.assign(steps.size() + 1, 0.0);

  // Depth-first over (time n, state j, occupancy so far, path probability).
  struct Frame {
    std::size_t n, state, occupancy;
    double prob;
  };
  std::vector<Frame> stack;
  for (std::size_t j = 0; j < d; ++j)
    if (v[j] > 0.0) stack.push_back({0, j, 0, v[j]});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const std::size_t occ = f.occupancy + (target[f.state] ? 1 : 0);
    const RawMatrix& b = steps.at(f.n);
    const double death = f.prob * column_deficit(b, f.state);
    if (death > 0.0) out.probs[occ] += death;
    for (std::size_t i = 0; i < d; ++i) {
      const double p = b[i][f.state];
      if (p > 0.0) stack.push_back({f.n + 1, i, occ, f.prob * p});
    }
  }
  for (std::size_t a = 0; a < out.probs.size(); ++a) {
    const double x = static_cast<double>(a);
    out.first_moment += x * out.probs[a];
    out.second_moment += x * x * out.probs[a];
    out.total += out.probs[a];
  }
  return out;
}

/// P{N = n} = b^T B^{n-1} v with B^{n-1} formed as an explicit matrix power.
inline std::vector<double> phase_type_pmf(const Matrix& b, const Vector& v, std::size_t n_max) {
  const Eigen::Index d = b.rows();
  const Vector exit = Vector::Ones(d) - b.colwise().sum().transpose();
  std::vector<double> pmf(n_max + 1, 0.0);
  Matrix power = Matrix::Identity(d, d);
  for (std::size_t n = 1; n <= n_max; ++n) {
    pmf[n] = exit.dot(power * v);
    power = power * b;
  }
  return pmf;
}

/// Random column-substochastic matrix with every column sum drawn from
/// [min_sum, max_sum].
inline RawMatrix random_substochastic(std::size_t d, double min_sum, double max_sum,
                                      std::mt19937_64& rng, double sparsity = 0.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RawMatrix m(d, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < d; ++j) {
    double total = 0.0;
    std::vector<double> w(d);
    for (std::size_t i = 0; i < d; ++i) {
      w[i] = unit(rng) < sparsity ? 0.0 : unit(rng);
      total += w[i];
    }
    if (total == 0.0) {
      w[j] = 1.0;
      total = 1.0;
    }
    const double sum = min_sum + (max_sum - min_sum) * unit(rng);
    for (std::size_t i = 0; i < d; ++i) m[i][j] = w[i] / total * sum;
  }
  return m;
}

inline std::vector<double> random_distribution(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(d);
  double total = 0.0;
  for (auto& x : v) total += (x = unit(rng));
  for (auto& x : v) x /= total;
  return v;
}

inline std::vector<bool> random_mask(std::size_t d, std::mt19937_64& rng) {
  std::vector<bool> mask(d);
  for (std::size_t j = 0; j < d; ++j) mask[j] = (rng() & 1u) != 0;
  return mask;
}

inline Matrix to_matrix(const RawMatrix& raw) {
  const auto d = static_cast<Eigen::Index>(raw.size());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<std::size_t> mask_members(const std::vector<bool>& mask) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask[j]) out.push_back(j);
  return out;
}

}  // namespace occtime::testing
