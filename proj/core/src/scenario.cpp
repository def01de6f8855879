#include "occtime/scenario.hpp"

#include "occtime/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace occtime {

using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kColumnConvention = "column-stochastic-convention";
constexpr std::string_view kRowConvention = "row-stochastic-convention";

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

// Prefixes the offending field to a validation error while keeping its kind.
template <typename F>
auto at_field(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

const json& require(const json& obj, const std::string& key, const std::string& prefix = "") {
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(prefix + key, "missing required key");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) parse_error(where, "expected a string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) {
    parse_error(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string extension_name(Extension e) {
  switch (e) {
    case Extension::HoldLast: return "hold_last";
    case Extension::Cycle: return "cycle";
    case Extension::Error: return "error";
  }
  return "hold_last";
}

Extension parse_extension(const json& j) {
  const std::string s = as_string(j, "schedule.extension");
  if (s == "hold_last") return Extension::HoldLast;
  if (s == "cycle") return Extension::Cycle;
  if (s == "error") return Extension::Error;
  parse_error("schedule.extension", "expected hold_last, cycle or error, got '" + s + "'");
}

StateSpace parse_states(const json& j) {
  if (!j.is_array() || j.empty()) parse_error("states", "expected a non-empty list of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j.size(); ++i)
    labels.push_back(as_string(j[i], "states[" + std::to_string(i) + "]"));
  return at_field("states", [&] { return StateSpace(std::move(labels)); });
}

std::vector<NamedMatrix> parse_matrices(const json& j, std::size_t d, bool row_convention) {
  if (!j.is_object() || j.empty()) parse_error("matrices", "expected a non-empty object");
  std::vector<NamedMatrix> out;
  for (const auto& [name, value] : j.items()) {
    const std::string where = "matrices." + name;
    if (!value.is_array() || value.size() != d) {
      parse_error(where, "expected " + std::to_string(d) + " rows");
    }
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) {
      const json& row = value[r];
      const std::string row_where = where + "[" + std::to_string(r) + "]";
      if (!row.is_array() || row.size() != d) {
        throw Error(ErrorKind::NonSquare,
                    row_where + ": expected " + std::to_string(d) + " entries");
      }
      for (std::size_t c = 0; c < d; ++c) {
        const double x = as_number(row[c], row_where + "[" + std::to_string(c) + "]");
        const auto i = static_cast<Eigen::Index>(r), k = static_cast<Eigen::Index>(c);
        if (row_convention) m(k, i) = x; else m(i, k) = x;
      }
    }
    out.push_back({name, at_field(where, [&] { return TransitionMatrix(std::move(m)); })});
  }
  return out;
}

std::size_t state_index(const StateSpace& states, const std::string& label,
                        const std::string& where, ErrorKind kind) {
  auto idx = states.index_of(label);
  if (!idx) throw Error(kind, where + ": unknown state label '" + label + "'");
  return *idx;
}

InitialDistribution parse_initial(const json& j, const StateSpace& states) {
  const std::size_t d = states.size();
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
  if (j.is_string()) {
    v(static_cast<Eigen::Index>(state_index(states, j.get<std::string>(), "initial",
                                            ErrorKind::InvalidDistribution))) = 1.0;
  } else if (j.is_array()) {
    if (j.size() != d) {
      throw Error(ErrorKind::InvalidDistribution,
                  "initial: expected " + std::to_string(d) + " probabilities");
    }
    for (std::size_t i = 0; i < d; ++i)
      v(static_cast<Eigen::Index>(i)) = as_number(j[i], "initial[" + std::to_string(i) + "]");
  } else if (j.is_object()) {
    for (const auto& [label, p] : j.items()) {
      v(static_cast<Eigen::Index>(
          state_index(states, label, "initial", ErrorKind::InvalidDistribution))) =
          as_number(p, "initial." + label);
    }
  } else {
    parse_error("initial", "expected a list of probabilities, a state label or an object");
  }
  return at_field("initial", [&] { return InitialDistribution(std::move(v)); });
}

TargetSet parse_target(const json& j, const StateSpace& states) {
  if (!j.is_array()) parse_error("target_set", "expected a list of state labels");
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "target_set[" + std::to_string(i) + "]";
    members.push_back(state_index(states, as_string(j[i], where), where,
                                  ErrorKind::InvalidTargetLabel));
  }
  return TargetSet(states.size(), std::move(members));
}

void require_matrix(const std::vector<NamedMatrix>& matrices, const std::string& name,
                    const std::string& where) {
  for (const auto& m : matrices)
    if (m.name == name) return;
  throw Error(ErrorKind::UnknownMatrixName, where + ": no matrix named '" + name + "'");
}

ScheduleConfig parse_schedule(const json& j, const std::vector<NamedMatrix>& matrices) {
  if (!j.is_object()) parse_error("schedule", "expected an object");
  const std::string kind = as_string(require(j, "kind", "schedule."), "schedule.kind");
  if (kind == "constant") {
    ConstantScheduleConfig c{as_string(require(j, "matrix", "schedule."), "schedule.matrix")};
    require_matrix(matrices, c.matrix, "schedule.matrix");
    return c;
  }
  if (kind == "explicit") {
    const json& seq = require(j, "sequence", "schedule.");
    if (!seq.is_array() || seq.empty()) {
      parse_error("schedule.sequence", "expected a non-empty list of matrix names");
    }
    ExplicitScheduleConfig c;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const std::string where = "schedule.sequence[" + std::to_string(i) + "]";
      c.sequence.push_back(as_string(seq[i], where));
      require_matrix(matrices, c.sequence.back(), where);
    }
    if (auto it = j.find("extension"); it != j.end()) c.extension = parse_extension(*it);
    return c;
  }
  if (kind == "random") {
    const json& probs = require(j, "probabilities", "schedule.");
    if (!probs.is_object() || probs.empty()) {
      parse_error("schedule.probabilities", "expected an object of matrix name -> probability");
    }
    RandomScheduleConfig c;
    for (const auto& [name, p] : probs.items()) {
      const std::string where = "schedule.probabilities." + name;
      require_matrix(matrices, name, where);
      c.probabilities.emplace_back(name, as_number(p, where));
    }
    c.length = as_count(require(j, "length", "schedule."), "schedule.length");
    if (c.length == 0) parse_error("schedule.length", "must be at least 1");
    return c;
  }
  parse_error("schedule.kind", "expected constant, explicit or random, got '" + kind + "'");
}

}  // namespace

const TransitionMatrix& ScenarioConfig::matrix(const std::string& name) const {
  for (const auto& m : matrices)
    if (m.name == name) return m.matrix;
  throw Error(ErrorKind::UnknownMatrixName, "no matrix named '" + name + "'");
}

EnvironmentSchedule ScenarioConfig::deterministic_schedule() const {
  if (const auto* c = std::get_if<ConstantScheduleConfig>(&schedule)) {
    return EnvironmentSchedule::constant(matrix(c->matrix));
  }
  if (const auto* e = std::get_if<ExplicitScheduleConfig>(&schedule)) {
    std::vector<TransitionMatrix> mats;
    std::vector<std::size_t> seq;
    std::vector<std::string> names;
    for (const auto& name : e->sequence) {
      auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) {
        names.push_back(name);
        mats.push_back(matrix(name));
        seq.push_back(names.size() - 1);
      } else {
        seq.push_back(static_cast<std::size_t>(it - names.begin()));
      }
    }
    return EnvironmentSchedule::explicit_sequence(std::move(mats), std::move(seq), e->extension);
  }
  throw Error(ErrorKind::InvalidSchedule, "scenario has a random schedule");
}

RandomEnvironmentSpec ScenarioConfig::random_spec() const {
  const auto* r = std::get_if<RandomScheduleConfig>(&schedule);
  if (!r) throw Error(ErrorKind::InvalidSchedule, "scenario schedule is not random");
  std::vector<EnvironmentCondition> conditions;
  for (const auto& [name, p] : r->probabilities) conditions.push_back({name, matrix(name), p});
  return RandomEnvironmentSpec(std::move(conditions));
}

EnvironmentSchedule ScenarioConfig::sample_random_schedule(std::uint64_t seed) const {
  const auto spec = random_spec();
  Rng rng(seed);
  return sample_schedule(spec, std::get<RandomScheduleConfig>(schedule).length, rng);
}

EnvironmentSchedule ScenarioConfig::schedule_for(std::uint64_t seed) const {
  return is_random() ? sample_random_schedule(seed) : deterministic_schedule();
}

TargetSet ScenarioConfig::target_from_labels(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> members;
  for (const auto& label : labels)
    members.push_back(state_index(states, label, "target", ErrorKind::InvalidTargetLabel));
  return TargetSet(states.size(), std::move(members));
}

ScenarioConfig load_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!root.is_object()) parse_error("<root>", "expected an object");

  static const std::set<std::string> known = {"states",     "orientation", "matrices",
                                              "schedule",   "initial",     "target_set",
                                              "start",      "tail_tol",    "max_horizon",
                                              "description"};
  for (const auto& [key, value] : root.items()) {
    if (!known.count(key)) parse_error(key, "unknown key");
  }

  bool row_convention = false;
  if (auto it = root.find("orientation"); it != root.end()) {
    const std::string o = as_string(*it, "orientation");
    if (o == kRowConvention) {
      row_convention = true;
    } else if (o != kColumnConvention) {
      parse_error("orientation", "expected '" + std::string(kColumnConvention) + "' or '" +
                                     std::string(kRowConvention) + "'");
    }
  }

  StateSpace states = parse_states(require(root, "states"));
  auto matrices = parse_matrices(require(root, "matrices"), states.size(), row_convention);
  ScheduleConfig schedule = parse_schedule(require(root, "schedule"), matrices);
  InitialDistribution initial = parse_initial(require(root, "initial"), states);
  TargetSet target = parse_target(require(root, "target_set"), states);

  ScenarioConfig config{std::move(states), std::move(matrices), std::move(schedule),
                        std::move(initial), std::move(target), 0, TruncationOptions{}, ""};
  if (auto it = root.find("start"); it != root.end()) config.start = as_count(*it, "start");
  if (auto it = root.find("tail_tol"); it != root.end()) {
    config.truncation.tail_tol = as_number(*it, "tail_tol");
    if (!(config.truncation.tail_tol > 0.0)) parse_error("tail_tol", "must be positive");
  }
  if (auto it = root.find("max_horizon"); it != root.end()) {
    config.truncation.max_horizon = as_count(*it, "max_horizon");
    if (config.truncation.max_horizon == 0) parse_error("max_horizon", "must be positive");
  }
  if (auto it = root.find("description"); it != root.end()) {
    config.description = as_string(*it, "description");
  }
  if (config.is_random()) {
    at_field("schedule.probabilities", [&] { return config.random_spec(); });
  }
  return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  if (path == kBuiltinFulmarPath) return fulmar_scenario();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& config) {
  json root;
  if (!config.description.empty()) root["description"] = config.description;
  root["states"] = config.states.labels();
  root["orientation"] = std::string(kColumnConvention);
  json mats = json::object();
  for (const auto& m : config.matrices) {
    json rows = json::array();
    const Matrix& e = m.matrix.entries();
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < e.cols(); ++j) row.push_back(e(i, j));
      rows.push_back(std::move(row));
    }
    mats[m.name] = std::move(rows);
  }
  root["matrices"] = std::move(mats);

  json sched;
  if (const auto* c = std::get_if<ConstantScheduleConfig>(&config.schedule)) {
    sched["kind"] = "constant";
    sched["matrix"] = c->matrix;
  } else if (const auto* e = std::get_if<ExplicitScheduleConfig>(&config.schedule)) {
    sched["kind"] = "explicit";
    sched["sequence"] = e->sequence;
    sched["extension"] = extension_name(e->extension);
  } else {
    const auto& r = std::get<RandomScheduleConfig>(config.schedule);
    sched["kind"] = "random";
    json probs = json::object();
    for (const auto& [name, p] : r.probabilities) probs[name] = p;
    sched["probabilities"] = std::move(probs);
    sched["length"] = r.length;
  }
  root["schedule"] = std::move(sched);

  json initial = json::array();
  for (Eigen::Index i = 0; i < config.initial.values().size(); ++i)
    initial.push_back(config.initial.values()(i));
  root["initial"] = std::move(initial);

  json target = json::array();
  for (std::size_t j : config.target.members()) target.push_back(config.states.label(j));
  root["target_set"] = std::move(target);
  root["start"] = config.start;
  root["tail_tol"] = config.truncation.tail_tol;
  root["max_horizon"] = config.truncation.max_horizon;
  return root.dump(2) + "\n";
}

const std::array<FulmarDecimals, 3>& fulmar_decimals() {
  static const std::array<FulmarDecimals, 3> table = {{
      {"U_f",
       {{{"0.828", "0", "0", "0"},
         {"0.06624", "0.72912", "0.62244", "0.40176"},
         {"0.02576", "0.18228", "0.24206", "0.15624"},
         {"0", "0.0186", "0.0455", "0.342"}}}},
      {"U_o",
       {{{"0.9016", "0", "0", "0"},
         {"0.011408", "0.66737", "0.49312", "0.1809"},
         {"0.006992", "0.18823", "0.24288", "0.0891"},
         {"0", "0.0744", "0.184", "0.63"}}}},
      {"U_u",
       {{{"0.9154", "0", "0", "0"},
         {"0.002392", "0.4873", "0.25147", "0.0468"},
         {"0.002208", "0.1895", "0.23213", "0.0432"},
         {"0", "0.2632", "0.4464", "0.81"}}}},
  }};
  return table;
}

namespace {

TransitionMatrix matrix_from_decimals(const FulmarDecimals& dec) {
  Matrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m(i, j) = std::strtod(std::string(dec.rows[i][j]).c_str(), nullptr);
  return TransitionMatrix(std::move(m));
}

}  // namespace

const FulmarDataset& builtin_fulmar() {
  static const FulmarDataset dataset{
      StateSpace({"pre-breeder", "successful breeder", "failed breeder", "non-breeder"}),
      matrix_from_decimals(fulmar_decimals()[0]),
      matrix_from_decimals(fulmar_decimals()[1]),
      matrix_from_decimals(fulmar_decimals()[2]),
  };
  return dataset;
}

ScenarioConfig fulmar_scenario() {
  const auto& f = builtin_fulmar();
  std::vector<NamedMatrix> matrices = {
      {"U_f", f.favourable}, {"U_o", f.ordinary}, {"U_u", f.unfavourable}};
  ScenarioConfig config{f.states, std::move(matrices), ConstantScheduleConfig{"U_f"},
                        InitialDistribution::unit(4, 0), TargetSet(4, {1, 2}), 0,
                        TruncationOptions{}, ""};
  config.description =
      "Southern Fulmar breeding-state model; constant favourable ice conditions, "
      "individuals start as pre-breeders, target set = breeding states";
  return config;
}

}  // namespace occtime
