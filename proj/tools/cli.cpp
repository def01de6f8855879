#include "cli.hpp"

#include "occtime/chain.hpp"
#include "occtime/error.hpp"
#include "occtime/export.hpp"
#include "occtime/occupancy.hpp"
#include "occtime/random_environment.hpp"
#include "occtime/scenario.hpp"
#include "occtime/trajectory.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace occtime::cli {

namespace {

struct Options {
  std::string scenario;
  std::optional<std::string> target;
  std::optional<std::size_t> start;
  std::optional<double> tail_tol;
  std::optional<std::size_t> max_horizon;
  std::size_t order = 2;
  std::uint64_t samples = 2000;
  std::uint64_t seed = 1;
  double grid_step = 0.05;
  std::string format = "csv";
  std::string out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

std::vector<std::string> split_labels(const std::string& text) {
  std::vector<std::string> labels;
  if (text.empty()) return labels;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) labels.push_back(item);
  if (text.back() == ',') labels.emplace_back();
  return labels;
}

// Seed for sampling one environment realization; disjoint from the
// per-trajectory streams derive_seed(seed, {i}).
std::uint64_t environment_seed(std::uint64_t seed) { return derive_seed(seed, {~0ULL, 0}); }

struct Context {
  ScenarioConfig config;
  TargetSet target;
  TruncationOptions truncation;
  std::size_t start;
};

Context load(const Options& opt) {
  ScenarioConfig config = load_scenario_file(opt.scenario);
  TargetSet target = opt.target ? config.target_from_labels(split_labels(*opt.target)) : config.target;
  TruncationOptions truncation = config.truncation;
  if (opt.tail_tol) truncation.tail_tol = *opt.tail_tol;
  if (opt.max_horizon) truncation.max_horizon = *opt.max_horizon;
  const std::size_t start = opt.start.value_or(config.start);
  return {std::move(config), std::move(target), truncation, start};
}

std::vector<EnvironmentCondition> sweep_conditions(const ScenarioConfig& config) {
  std::vector<EnvironmentCondition> out;
  if (const auto* r = std::get_if<RandomScheduleConfig>(&config.schedule)) {
    for (const auto& [name, p] : r->probabilities) out.push_back({name, config.matrix(name), 0.0});
  } else {
    for (const auto& m : config.matrices) out.push_back({m.name, m.matrix, 0.0});
  }
  if (out.size() != 3) {
    throw Error(ErrorKind::InvalidArgument,
                "env-sweep needs exactly three conditions (random schedule entries or declared "
                "matrices), found " + std::to_string(out.size()));
  }
  return out;
}

ExportResult compute(const std::string& command, const Options& opt) {
  Context ctx = load(opt);
  const ScenarioConfig& cfg = ctx.config;

  if (command == "validate") return ValidationReport{cfg.states, cfg.matrices};

  if (command == "lifetime") {
    return lifetime_distribution(cfg.schedule_for(environment_seed(opt.seed)), cfg.initial,
                                 ctx.truncation, ctx.start);
  }
  if (command == "occupancy") {
    return occupancy_distribution(cfg.schedule_for(environment_seed(opt.seed)), cfg.initial,
                                  ctx.target, ctx.start, ctx.truncation);
  }
  if (command == "moments") {
    if (cfg.is_random()) {
      return two_level_stats(cfg.random_spec(), cfg.initial, ctx.target, opt.samples, opt.seed,
                             ctx.truncation, ctx.start, opt.threads);
    }
    return MomentsReport{occupancy_moments(cfg.deterministic_schedule(), cfg.initial, ctx.target,
                                           ctx.start, opt.order, ctx.truncation)};
  }
  if (command == "simulate") {
    const auto schedule = cfg.schedule_for(environment_seed(opt.seed));
    SimulationReport report;
    report.seed = opt.seed;
    report.analytic = occupancy_distribution(schedule, cfg.initial, ctx.target, ctx.start, ctx.truncation);
    report.analytic_mean =
        occupancy_moments(schedule, cfg.initial, ctx.target, ctx.start, 1, ctx.truncation).moment(1);
    report.empirical = empirical_distribution(schedule, cfg.initial, ctx.target, ctx.start,
                                              opt.samples, opt.seed, opt.threads);
    report.tv_distance = total_variation(report.empirical.occupancy_histogram(),
                                         report.analytic.probs, report.analytic.tail_mass);
    return report;
  }
  // env-sweep
  auto conditions = sweep_conditions(cfg);
  SweepTable table;
  for (const auto& c : conditions) table.condition_labels.push_back(c.label);
  table.points = simplex_sweep(conditions, opt.grid_step, cfg.initial, ctx.target, opt.samples,
                               opt.seed, ctx.truncation, ctx.start, opt.threads);
  return table;
}

void add_common(CLI::App& sub, Options& opt, const std::string& name) {
  sub.add_option("--scenario", opt.scenario, "Scenario JSON file, or builtin:fulmar")->required();
  sub.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--out", opt.out, "Output file (default: standard output)");
  if (name == "validate") return;
  sub.add_option("--target", opt.target, "Comma-separated target state labels (overrides file)");
  sub.add_option("--start", opt.start, "Time index at which the chain starts");
  sub.add_option("--tail-tol", opt.tail_tol, "Stop once surviving mass falls below this")
      ->check(CLI::PositiveNumber);
  sub.add_option("--max-horizon", opt.max_horizon, "Step cap before NonAbsorbing is reported")
      ->check(CLI::PositiveNumber);
  sub.add_option("--seed", opt.seed, "Master seed");
  if (name == "moments") {
    sub.add_option("--order", opt.order, "Highest raw moment K")->check(CLI::PositiveNumber);
  }
  if (name == "moments" || name == "simulate" || name == "env-sweep") {
    sub.add_option("--samples", opt.samples,
                   "Trajectories (simulate) or environment sequences M (random moments, env-sweep)")
        ->check(CLI::PositiveNumber);
    sub.add_option("--threads", opt.threads, "Worker threads; output does not depend on it")
        ->check(CLI::PositiveNumber);
  }
  if (name == "env-sweep") {
    sub.add_option("--grid-step", opt.grid_step, "Simplex grid spacing; must divide 1")
        ->check(CLI::Range(0.0, 1.0));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact occupancy-time analysis for inhomogeneous absorbing Markov chains", "occtime"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "Check matrices; print column sums and absorption vectors"},
      {"lifetime", "Distribution of the lifetime N"},
      {"occupancy", "Distribution of the lifetime occupancy time of the target set"},
      {"moments", "Raw moments of the occupancy time (two-level statistics for random schedules)"},
      {"simulate", "Monte Carlo trajectories compared against the exact distribution"},
      {"env-sweep", "Two-level statistics over a grid of the probability simplex"},
  };
  for (const auto& [name, help] : commands) add_common(*app.add_subcommand(name, help), opt, name);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Format format = parse_format(opt.format);
    const ExportResult result = compute(command, opt);
    if (opt.out.empty() || opt.out == "-") {
      export_results(result, format, out);
    } else {
      export_results(result, format, opt.out);
    }
    if (const auto* sweep = std::get_if<SweepTable>(&result)) {
      for (const auto& p : sweep->points)
        if (!p.error.empty()) err << "warning: sweep point (" << p.i << "," << p.j << "): " << p.error << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace occtime::cli
