#include "occtime/error.hpp"
#include "occtime/export.hpp"
#include "occtime/scenario.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace occtime {
namespace {

std::string render(const ExportResult& r, Format f = Format::Csv) {
  std::ostringstream out;
  export_results(r, f, out);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0), "1.0");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(1e-13), "1e-13");
  EXPECT_EQ(format_number(123456789012345.0), "1.23456789012e+14");
  EXPECT_EQ(format_number(-2.0), "-2.0");
}

TEST(ParseFormat, Names) {
  EXPECT_EQ(parse_format("csv"), Format::Csv);
  EXPECT_EQ(parse_format("json"), Format::Json);
  EXPECT_THROW(parse_format("xml"), Error);
}

TEST(ExportCsv, OccupancyDistribution) {
  OccupancyDistribution d;
  d.probs = {0.5, 0.25, 0.125};
  d.tail_mass = 0.125;
  d.horizon = 3;
  EXPECT_EQ(render(d), "a,probability\n0,0.5\n1,0.25\n2,0.125\ntail_mass,0.125\n");
}

TEST(ExportCsv, EmptyTargetPointMass) {
  OccupancyDistribution d;
  d.probs = {1.0};
  const auto lines = lines_of(render(d));
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[1], "0,1.0");
}

TEST(ExportCsv, LifetimeSkipsZero) {
  LifetimeDistribution d;
  d.probs = {0.0, 0.75, 0.25};
  EXPECT_EQ(render(d), "n,probability\n1,0.75\n2,0.25\ntail_mass,0.0\n");
}

TEST(ExportCsv, Moments) {
  OccupancyMoments m;
  m.raw = {1.0, 3.0};
  m.horizon = 40;
  EXPECT_EQ(render(MomentsReport{m}),
            "k,raw_moment\n1,1.0\n2,3.0\nmean,1.0\nvariance,2.0\ncv,1.41421356237\ntail_mass,0.0\nhorizon,40\n");
  m.raw = {0.0};
  EXPECT_EQ(render(MomentsReport{m}), "k,raw_moment\n1,0.0\ntail_mass,0.0\nhorizon,40\n");
}

TEST(ExportCsv, SweepHeaderAndFailures) {
  SweepTable t;
  t.condition_labels = {"U_f", "U_o", "U_u"};
  SweepPoint ok;
  ok.probabilities = {1.0, 0.0, 0.0};
  ok.stats = TwoLevelStats{2, 4.0, 1.0, 0.0, 1.0, 0.25};
  SweepPoint bad;
  bad.probabilities = {0.0, 0.5, 0.5};
  bad.error = "NonAbsorbing: x";
  t.points = {ok, bad};
  EXPECT_EQ(render(t),
            "p_f,p_o,p_u,mean,cv,within_var,between_var\n1.0,0.0,0.0,4.0,0.25,1.0,0.0\n"
            "0.0,0.5,0.5,nan,nan,nan,nan\n");
  const auto j = nlohmann::json::parse(render(t, Format::Json));
  EXPECT_EQ(j["kind"], "simplex_sweep");
  EXPECT_EQ(j["points"][1]["error"], "NonAbsorbing: x");
}

TEST(ExportCsv, TwoLevel) {
  const TwoLevelStats s{10, 2.0, 1.0, 0.5, 1.5, std::nullopt};
  EXPECT_EQ(render(s),
            "n_sequences,mean,cv,within_var,between_var,total_var\n10,2.0,undefined,1.0,0.5,1.5\n"
            "variance_convention,population\n");
}

TEST(ExportCsv, Validation) {
  const auto c = fulmar_scenario();
  const auto lines = lines_of(render(ValidationReport{c.states, c.matrices}));
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "matrix,quantity,pre-breeder,successful breeder,failed breeder,non-breeder");
  EXPECT_EQ(lines[2], "U_f,absorption,0.08,0.07,0.09,0.1");
  EXPECT_EQ(lines[4], "U_o,absorption,0.08,0.07,0.08,0.1");
  EXPECT_EQ(lines[6], "U_u,absorption,0.08,0.06,0.07,0.1");
}

TEST(ExportJson, OccupancyRoundTrip) {
  OccupancyDistribution d;
  d.probs = {0.5, 0.5};
  d.horizon = 2;
  const auto j = nlohmann::json::parse(render(d, Format::Json));
  EXPECT_EQ(j["kind"], "occupancy_distribution");
  EXPECT_EQ(j["probabilities"][1]["a"], 1);
  EXPECT_DOUBLE_EQ(j["probabilities"][1]["probability"].get<double>(), 0.5);
  EXPECT_EQ(j["horizon"], 2);
}

TEST(ExportFile, WritesAndReportsIoError) {
  const auto path = std::filesystem::temp_directory_path() / "occtime_export_test.csv";
  OccupancyDistribution d;
  d.probs = {1.0};
  export_results(d, Format::Csv, path.string());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), render(d));
  std::filesystem::remove(path);
  try {
    export_results(d, Format::Csv, "/nonexistent-dir/out.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoError);
  }
}

}  // namespace
}  // namespace occtime
