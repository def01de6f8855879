#include "occtime/occupancy.hpp"
#include "occtime/random_environment.hpp"
#include "occtime/scenario.hpp"
#include "occtime/trajectory.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace occtime;

const TargetSet kBreeders(4, {1, 2});
const InitialDistribution kPreBreeder = InitialDistribution::unit(4, 0);

EnvironmentSchedule favourable() { return EnvironmentSchedule::constant(builtin_fulmar().favourable); }

void BM_FulmarMoments(benchmark::State& state) {
  const auto sched = favourable();
  const auto order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(occupancy_moments(sched, kPreBreeder, kBreeders, 0, order));
}
BENCHMARK(BM_FulmarMoments)->Arg(2)->Arg(4)->Arg(8);

void BM_FulmarOccupancyDistribution(benchmark::State& state) {
  const auto sched = favourable();
  for (auto _ : state) benchmark::DoNotOptimize(occupancy_distribution(sched, kPreBreeder, kBreeders));
}
BENCHMARK(BM_FulmarOccupancyDistribution);

// The joint table grows quadratically with the horizon; the tolerance sets it.
void BM_EvolveJoint(benchmark::State& state) {
  const auto sched = favourable();
  TruncationOptions opts;
  opts.tail_tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  std::size_t horizon = 0;
  for (auto _ : state) {
    auto table = evolve_joint(sched, kPreBreeder, kBreeders, 0, opts);
    horizon = table.horizon();
    benchmark::DoNotOptimize(table);
  }
  state.counters["horizon"] = static_cast<double>(horizon);
}
BENCHMARK(BM_EvolveJoint)->Arg(6)->Arg(12);

void BM_SimulateTrajectories(benchmark::State& state) {
  const auto sched = favourable();
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(empirical_distribution(sched, kPreBreeder, kBreeders, 0, n, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SimulateTrajectories)->Arg(10000);

void BM_TwoLevelStats(benchmark::State& state) {
  const auto& f = builtin_fulmar();
  const RandomEnvironmentSpec spec({{"U_f", f.favourable, 0.3}, {"U_o", f.ordinary, 0.4}, {"U_u", f.unfavourable, 0.3}});
  const auto m = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(two_level_stats(spec, kPreBreeder, kBreeders, m, 1));
}
BENCHMARK(BM_TwoLevelStats)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
