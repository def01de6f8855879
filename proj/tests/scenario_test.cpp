#include "occtime/error.hpp"
#include "occtime/scenario.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#ifndef OCCTIME_FIXTURE_DIR
#error "OCCTIME_FIXTURE_DIR must be defined"
#endif

namespace occtime {
namespace {

const char* kMinimal = R"({
  "states": ["alive", "target"],
  "matrices": {"B": [[0, 0], [0.5, 0.5]]},
  "schedule": {"kind": "constant", "matrix": "B"},
  "initial": [1, 0],
  "target_set": ["target"]
})";

ErrorKind load_kind(const std::string& text, std::string* message = nullptr) {
  try {
    load_scenario(text);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "scenario loaded unexpectedly";
  return ErrorKind::InvalidArgument;
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

TEST(LoadScenario, Minimal) {
  const auto c = load_scenario(kMinimal);
  EXPECT_EQ(c.states.size(), 2u);
  EXPECT_EQ(c.target.members(), std::vector<std::size_t>{1});
  EXPECT_EQ(c.matrix("B")(1, 0), 0.5);
  EXPECT_EQ(c.truncation, TruncationOptions{});
  EXPECT_FALSE(c.is_random());
  EXPECT_EQ(c.deterministic_schedule().at(3), c.matrix("B"));
}

TEST(LoadScenario, InitialForms) {
  const auto by_label = load_scenario(replace(kMinimal, "[1, 0]", "\"alive\""));
  EXPECT_EQ(by_label.initial, InitialDistribution::unit(2, 0));
  const auto by_object = load_scenario(replace(kMinimal, "[1, 0]", R"({"alive": 0.25, "target": 0.75})"));
  EXPECT_DOUBLE_EQ(by_object.initial.values()(1), 0.75);
}

TEST(LoadScenario, RowOrientationIsTransposed) {
  const auto row = load_scenario(replace(
      replace(kMinimal, "[[0, 0], [0.5, 0.5]]", "[[0, 0.5], [0, 0.5]]"), "\"states\"",
      R"("orientation": "row-stochastic-convention", "states")"));
  EXPECT_EQ(row.matrix("B"), load_scenario(kMinimal).matrix("B"));
}

TEST(LoadScenario, Errors) {
  std::string msg;
  EXPECT_EQ(load_kind(replace(kMinimal, R"("matrix": "B")", R"("matrix": "favorable")"), &msg),
            ErrorKind::UnknownMatrixName);
  EXPECT_NE(msg.find("favorable"), std::string::npos);

  EXPECT_EQ(load_kind(replace(kMinimal, R"(["target"])", R"(["breeder"])"), &msg),
            ErrorKind::InvalidTargetLabel);
  EXPECT_NE(msg.find("breeder"), std::string::npos);

  EXPECT_EQ(load_kind(replace(kMinimal, "[1, 0]", "[0.5, 0.4]")), ErrorKind::InvalidDistribution);
  EXPECT_EQ(load_kind(replace(kMinimal, "[1, 0]", "\"nobody\"")), ErrorKind::InvalidDistribution);

  EXPECT_EQ(load_kind("{ not json"), ErrorKind::ParseError);
  EXPECT_EQ(load_kind(replace(kMinimal, "\"constant\"", "\"weekly\""), &msg), ErrorKind::ParseError);
  EXPECT_NE(msg.find("schedule.kind"), std::string::npos);
  EXPECT_EQ(load_kind(replace(kMinimal, R"("kind": "constant", )", ""), &msg), ErrorKind::ParseError);
  EXPECT_NE(msg.find("schedule.kind"), std::string::npos);
  EXPECT_EQ(load_kind(replace(kMinimal, "\"states\"", R"("colour": 1, "states")")), ErrorKind::ParseError);

  EXPECT_EQ(load_kind(replace(kMinimal, "[[0, 0]", "[[0.6, 0]")), ErrorKind::ColumnSumExceedsOne);
  EXPECT_EQ(load_kind(replace(kMinimal, "[0.5, 0.5]]", "[0.5]]")), ErrorKind::NonSquare);
}

TEST(LoadScenario, RandomSchedule) {
  const std::string text = R"({
    "states": ["a"],
    "matrices": {"hi": [[0.9]], "lo": [[0.1]]},
    "schedule": {"kind": "random", "probabilities": {"hi": 0.25, "lo": 0.75}, "length": 40},
    "initial": [1],
    "target_set": ["a"]
  })";
  const auto c = load_scenario(text);
  ASSERT_TRUE(c.is_random());
  EXPECT_EQ(c.random_spec().conditions().size(), 2u);
  EXPECT_EQ(c.sample_random_schedule(3).sequence(), c.sample_random_schedule(3).sequence());
  EXPECT_EQ(c.sample_random_schedule(3).sequence().size(), 40u);
  EXPECT_THROW(c.deterministic_schedule(), Error);
  EXPECT_EQ(load_kind(replace(text, "0.75", "0.5")), ErrorKind::InvalidDistribution);
  EXPECT_EQ(load_kind(replace(text, R"(, "length": 40)", "")), ErrorKind::ParseError);
  EXPECT_EQ(load_kind(replace(text, R"("hi": 0.25)", R"("med": 0.25)")), ErrorKind::UnknownMatrixName);
}

TEST(LoadScenario, RoundTrip) {
  std::vector<ScenarioConfig> configs = {load_scenario(kMinimal), fulmar_scenario()};
  auto explicit_cfg = fulmar_scenario();
  explicit_cfg.schedule = ExplicitScheduleConfig{{"U_f", "U_u", "U_o"}, Extension::Cycle};
  explicit_cfg.start = 2;
  explicit_cfg.truncation.tail_tol = 1e-10;
  configs.push_back(explicit_cfg);
  auto random_cfg = fulmar_scenario();
  random_cfg.schedule = RandomScheduleConfig{{{"U_f", 0.2}, {"U_o", 0.3}, {"U_u", 0.5}}, 32};
  configs.push_back(random_cfg);
  for (const auto& c : configs) {
    const auto again = load_scenario(serialize_scenario(c));
    EXPECT_EQ(again, c);
    EXPECT_EQ(serialize_scenario(again), serialize_scenario(c));
  }
}

TEST(Fulmar, TargetResolvesToBreedingStates) {
  const auto c = load_scenario_file(std::string(kBuiltinFulmarPath));
  EXPECT_EQ(c.target.members(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(c.target_from_labels({"successful breeder", "failed breeder"}).members(),
            (std::vector<std::size_t>{1, 2}));
  EXPECT_THROW(c.target_from_labels({"breeder"}), Error);
  EXPECT_EQ(c, fulmar_scenario());
}

TEST(Fulmar, EntriesAsPrinted) {
  const auto& f = builtin_fulmar();
  EXPECT_EQ(f.favourable(1, 0), 0.06624);
  EXPECT_EQ(f.unfavourable(3, 3), 0.81);
  for (const auto* m : {&f.favourable, &f.ordinary, &f.unfavourable}) {
    EXPECT_EQ(m->size(), 4u);
    EXPECT_NO_THROW(validate_matrix(m->entries()));
  }
}

// String-level comparison against an independently transcribed copy.
TEST(Fulmar, DecimalsMatchFixture) {
  std::ifstream in(std::string(OCCTIME_FIXTURE_DIR) + "/fulmar_matrices.txt");
  ASSERT_TRUE(in);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  ASSERT_EQ(lines.size(), 15u);
  const auto& table = fulmar_decimals();
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_EQ(lines[m * 5], table[m].name);
    for (std::size_t i = 0; i < 4; ++i) {
      std::istringstream row(lines[m * 5 + 1 + i]);
      for (std::size_t j = 0; j < 4; ++j) {
        std::string token;
        row >> token;
        EXPECT_EQ(token, table[m].rows[i][j]) << table[m].name << "(" << i + 1 << "," << j + 1 << ")";
      }
    }
  }
}

TEST(LoadScenarioFile, ShippedScenariosLoad) {
  const std::string dir = OCCTIME_SCENARIO_DIR;
  auto fulmar = load_scenario_file(dir + "/fulmar.json");
  fulmar.description.clear();
  auto builtin = fulmar_scenario();
  builtin.description.clear();
  EXPECT_EQ(fulmar, builtin);
  EXPECT_TRUE(load_scenario_file(dir + "/fulmar_random.json").is_random());
  EXPECT_NO_THROW(load_scenario_file(dir + "/fulmar_ice_template.json").deterministic_schedule());
  EXPECT_EQ(load_scenario_file(dir + "/geometric.json").target.members(), std::vector<std::size_t>{1});
}

TEST(LoadScenarioFile, MissingFile) {
  try {
    load_scenario_file("/nonexistent/scenario.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

}  // namespace
}  // namespace occtime
