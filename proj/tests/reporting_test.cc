// Copyright 2026 The Curriculum Syllabus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "curriculum/reporting.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "curriculum/stats.h"
#include "oracles.h"

namespace curriculum {
namespace {

namespace fs = std::filesystem;
using testing::SortMedianOracle;
using testing::SortQuantileOracle;

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> ReadCsv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream s(line);
    std::string f;
    while (std::getline(s, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

RunRecord Record(SyllabusKind kind, uint64_t seed, std::vector<double> target,
                 std::vector<double> multi, double test_error) {
  RunRecord r;
  r.seed = seed;
  r.problem = Problem::kCopy;
  r.syllabus = kind;
  r.config_hash = 0xabc + static_cast<uint64_t>(kind);
  for (size_t i = 0; i < target.size(); ++i) {
    r.rows.push_back({static_cast<long>(200 * (i + 1)), target[i], multi[i], 1, {}});
  }
  r.steps_completed = 200 * static_cast<long>(target.size());
  r.tests = {{"target-len40", test_error, 200}, {"multi-len40", test_error + 1, 200}};
  return r;
}

std::vector<RunRecord> RandomRecords(Rng& rng, int syllabuses, int seeds, int rows) {
  std::vector<RunRecord> records;
  for (int k = 0; k < syllabuses; ++k) {
    for (int s = 0; s < seeds; ++s) {
      std::vector<double> t;
      std::vector<double> m;
      for (int i = 0; i < rows; ++i) {
        t.push_back(40.0 * UniformUnit(rng));
        m.push_back(20.0 * UniformUnit(rng));
      }
      records.push_back(Record(static_cast<SyllabusKind>(k), s, t, m, 10 * UniformUnit(rng)));
    }
  }
  return records;
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("curriculum_report_" + name)) {
    fs::remove_all(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(StatsTest, QuantileRejectsBadInput) {
  EXPECT_THROW(SortedQuantile({}, 0.5), ContractViolation);
  const std::vector<double> v = {1.0};
  EXPECT_THROW(SortedQuantile(v, 1.5), ContractViolation);
  EXPECT_THROW(ComputeBoxStats({}), ContractViolation);
}

TEST(BoxStatsTest, IntegerPositions) {
  const std::vector<double> v = {4, 0, 3, 1, 2};
  const BoxStats b = ComputeBoxStats(v);
  EXPECT_EQ(b.min, 0.0);
  EXPECT_EQ(b.q1, 1.0);
  EXPECT_EQ(b.median, 2.0);
  EXPECT_EQ(b.q3, 3.0);
  EXPECT_EQ(b.max, 4.0);
}

TEST(BoxStatsTest, ConstantValues) {
  const std::vector<double> v(7, 3.25);
  const BoxStats b = ComputeBoxStats(v);
  for (double s : {b.min, b.q1, b.median, b.q3, b.max}) EXPECT_EQ(s, 3.25);
}

TEST(BoxStatsTest, RandomFixturesMatchOracle) {
  Rng rng = MakeRng(31, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(1 + rng() % 25);
    for (double& x : v) x = rng() % 4 == 0 ? static_cast<double>(rng() % 5) : 100 * UniformUnit(rng);
    const BoxStats b = ComputeBoxStats(v);
    EXPECT_EQ(b.min, *std::min_element(v.begin(), v.end()));
    EXPECT_EQ(b.max, *std::max_element(v.begin(), v.end()));
    EXPECT_EQ(b.q1, SortQuantileOracle(v, 0.25));
    EXPECT_EQ(b.q3, SortQuantileOracle(v, 0.75));
    EXPECT_EQ(b.median, SortMedianOracle(v));
    EXPECT_LE(b.min, b.q1);
    EXPECT_LE(b.q1, b.median);
    EXPECT_LE(b.median, b.q3);
    EXPECT_LE(b.q3, b.max);
  }
}

TEST(MedianCurveTest, SingleRecordIsItself) {
  const std::vector<RunRecord> records = {
      Record(SyllabusKind::kNone, 0, {5.0, 3.0, 1.0}, {6.0, 4.0, 2.0}, 0.0)};
  const auto curve = MedianCurve(records, Setting::kTarget);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[1].step, 400);
  EXPECT_EQ(curve[1].median, 3.0);
  EXPECT_EQ(MedianCurve(records, Setting::kMulti)[2].median, 2.0);
}

TEST(MedianCurveTest, EvenCountAveragesMiddlePair) {
  std::vector<RunRecord> records;
  for (double v : {4.0, 1.0, 3.0, 2.0}) records.push_back(Record(SyllabusKind::kNone, 0, {v}, {v}, 0));
  EXPECT_EQ(MedianCurve(records, Setting::kTarget)[0].median, 2.5);
}

TEST(MedianCurveTest, RandomFixturesMatchOracleAndArePermutationInvariant) {
  Rng rng = MakeRng(32, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    auto records = RandomRecords(rng, 1, 1 + static_cast<int>(rng() % 10), 3);
    const auto curve = MedianCurve(records, Setting::kTarget);
    for (size_t i = 0; i < curve.size(); ++i) {
      std::vector<double> column;
      for (const auto& r : records) column.push_back(r.rows[i].target_bits_error);
      ASSERT_EQ(curve[i].median, SortMedianOracle(column));
      ASSERT_EQ(curve[i].q1, SortQuantileOracle(column, 0.25));
      ASSERT_EQ(curve[i].q3, SortQuantileOracle(column, 0.75));
    }
    std::reverse(records.begin(), records.end());
    const auto reversed = MedianCurve(records, Setting::kTarget);
    for (size_t i = 0; i < curve.size(); ++i) ASSERT_EQ(reversed[i].median, curve[i].median);
  }
}

TEST(MedianCurveTest, MisalignedStepsAreStructuralErrors) {
  std::vector<RunRecord> records = {
      Record(SyllabusKind::kNone, 0, {1.0, 2.0}, {1.0, 2.0}, 0),
      Record(SyllabusKind::kNone, 1, {1.0, 2.0}, {1.0, 2.0}, 0)};
  records[1].rows[1].step = 500;
  EXPECT_THROW(MedianCurve(records, Setting::kTarget), StructuralError);
  EXPECT_THROW(MedianCurve(std::vector<RunRecord>{}, Setting::kTarget), ContractViolation);
}

TEST(MedianCurveTest, EarlyStoppedRunsTruncateToCommonPrefix) {
  const std::vector<RunRecord> records = {
      Record(SyllabusKind::kNone, 0, {3.0, 2.0, 1.0}, {3.0, 2.0, 1.0}, 0),
      Record(SyllabusKind::kNone, 1, {5.0, 4.0}, {5.0, 4.0}, 0)};
  const auto curve = MedianCurve(records, Setting::kTarget);
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_EQ(curve[1].median, 3.0);
}

TEST(MedianCurveTest, DivergedRunsAreLeftOut) {
  std::vector<RunRecord> records = {
      Record(SyllabusKind::kNone, 0, {1.0}, {1.0}, 0),
      Record(SyllabusKind::kNone, 1, {99.0}, {99.0}, 0)};
  records[1].diverged = true;
  EXPECT_EQ(MedianCurve(records, Setting::kTarget)[0].median, 1.0);
}

TEST(EmitReportTest, WritesOneCurveFilePerSettingWithAllGroups) {
  TempDir dir("groups");
  Rng rng = MakeRng(33, 0);
  const auto records = RandomRecords(rng, 6, 3, 4);
  const auto written = EmitReport(records, dir.path());
  EXPECT_FALSE(written.empty());
  for (const char* setting : {"target", "multi"}) {
    const fs::path csv = dir.path() / (std::string("curves_copy_") + setting + ".csv");
    const auto rows = ReadCsv(csv);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0], (std::vector<std::string>{"step", "syllabus", "median", "q1", "q3"}));
    std::set<std::string> groups;
    for (size_t i = 1; i < rows.size(); ++i) groups.insert(rows[i][1]);
    EXPECT_EQ(groups.size(), 6u);
  }
  EXPECT_TRUE(fs::exists(dir.path() / "generalization_copy_target-len40.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "manifest.txt"));
}

size_t CountOccurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

TEST(EmitReportTest, PlotSeriesMatchCsvGroups) {
  TempDir dir("svg");
  Rng rng = MakeRng(34, 0);
  const auto records = RandomRecords(rng, 4, 3, 5);
  const auto written = EmitReport(records, dir.path());
  int checked = 0;
  for (const fs::path& path : written) {
    if (path.extension() != ".csv") continue;
    const auto rows = ReadCsv(path);
    const size_t column = path.filename().string().starts_with("curves_") ? 1 : 0;
    std::set<std::string> groups;
    for (size_t i = 1; i < rows.size(); ++i) groups.insert(rows[i][column]);
    fs::path svg = path;
    svg.replace_extension(".svg");
    const std::string plot = ReadFile(svg);
    EXPECT_EQ(CountOccurrences(plot, "class=\"series\""), groups.size()) << svg;
    for (const auto& g : groups) {
      EXPECT_NE(plot.find("data-group=\"" + g + "\""), std::string::npos) << g;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 4);  // two curves, two generalization tables
}

TEST(EmitReportTest, CsvRoundTripReproducesBoxStats) {
  TempDir dir("roundtrip");
  Rng rng = MakeRng(35, 0);
  const auto records = RandomRecords(rng, 3, 7, 2);
  EmitReport(records, dir.path());
  const auto rows = ReadCsv(dir.path() / "generalization_copy_target-len40.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (size_t i = 1; i < rows.size(); ++i) {
    const SyllabusKind kind = ParseSyllabus(rows[i][0]);
    std::vector<double> errors;
    for (const auto& r : records) {
      if (r.syllabus == kind) errors.push_back(r.tests[0].bits_error);
    }
    const BoxStats b = ComputeBoxStats(errors);
    EXPECT_EQ(std::strtod(rows[i][1].c_str(), nullptr), b.min);
    EXPECT_EQ(std::strtod(rows[i][2].c_str(), nullptr), b.q1);
    EXPECT_EQ(std::strtod(rows[i][3].c_str(), nullptr), b.median);
    EXPECT_EQ(std::strtod(rows[i][4].c_str(), nullptr), b.q3);
    EXPECT_EQ(std::strtod(rows[i][5].c_str(), nullptr), b.max);
  }
}

TEST(EmitReportTest, IdenticalInputsGiveIdenticalBytes) {
  TempDir a("bytes_a");
  TempDir b("bytes_b");
  Rng rng = MakeRng(36, 0);
  auto records = RandomRecords(rng, 3, 4, 3);
  const auto first = EmitReport(records, a.path());
  std::reverse(records.begin(), records.end());
  const auto second = EmitReport(records, b.path());
  ASSERT_EQ(first.size(), second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].filename(), second[i].filename());
    EXPECT_EQ(ReadFile(first[i]), ReadFile(second[i])) << first[i];
  }
}

TEST(EmitReportTest, ManifestAnnotatesDivergedRuns) {
  TempDir dir("manifest");
  Rng rng = MakeRng(37, 0);
  auto records = RandomRecords(rng, 1, 3, 2);
  records[2].diverged = true;
  EmitReport(records, dir.path());
  const std::string manifest = ReadFile(dir.path() / "manifest.txt");
  EXPECT_NE(manifest.find("quartile_method"), std::string::npos);
  EXPECT_NE(manifest.find("diverged"), std::string::npos);
  EXPECT_NE(manifest.find(HashToHex(records[0].config_hash)), std::string::npos);
}

TEST(EmitReportTest, UnwritableDirectoryNamesThePath) {
  TempDir dir("blocked");
  fs::create_directories(dir.path().parent_path());
  { std::ofstream(dir.path()) << "a file, not a directory"; }
  Rng rng = MakeRng(38, 0);
  const auto records = RandomRecords(rng, 1, 1, 1);
  try {
    EmitReport(records, dir.path() / "sub");
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find(dir.path().string()), std::string::npos) << e.what();
  }
  fs::remove(dir.path());
}

TEST(LoadRunRecordsTest, ReadsCompletedRunsFromHarnessOutput) {
  TempDir dir("load");
  ExperimentConfig config;
  config.problem.max_length = 3;
  config.layers = 1;
  config.hidden = 4;
  config.batch_size = 4;
  config.total_steps = 20;
  config.val_every = 10;
  config.val_target_size = 4;
  config.val_multi_size = 4;
  config.test_size = 4;
  config.seeds = 2;
  config.out_dir = dir.path().string();
  RunSuite(config);
  const auto records = LoadRunRecords(dir.path());
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(MedianCurve(records, Setting::kTarget).size(), 2u);
}

}  // namespace
}  // namespace curriculum
