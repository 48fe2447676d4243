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

// Seeded training runs: per-step task selection, training, periodic
// validation on a target-task and a multi-task set, syllabus progression,
// best-checkpoint selection and generalization tests.
//
// Run artifacts for seed k live in the output directory under the stem
// "<problem>_<syllabus>_seed<k>":
//   <stem>.csv          step,seed,problem,syllabus,setting,bits_error,current_task_flat_index
//   <stem>_summary.csv  test_name,bits_error,best_step
//   <stem>_best.ckpt    parameters at the best target-task validation
//   <stem>.status       written last; marks the run complete

#ifndef CURRICULUM_HARNESS_H_
#define CURRICULUM_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curriculum/config.h"
#include "curriculum/lstm.h"
#include "curriculum/tasks.h"

namespace curriculum {

enum class Setting { kTarget, kMulti };

std::string_view SettingName(Setting setting);
Setting ParseSetting(std::string_view name);

struct EvalSet {
  std::string name;
  std::vector<ExampleBatch> batches;  // each batch holds a single task

  int examples() const;
};

struct EvalSets {
  EvalSet val_target;
  EvalSet val_multi;
  std::vector<EvalSet> tests;
};

// A generalization test: a task beyond the training grid.
struct GeneralizationTest {
  std::string name;
  ProblemSpec spec;  // widened to admit `task`
  TaskId task;
};

// Copy: length round(1.25 * max_length). RepeatCopy: length
// round(16/13 * max_length) at max repeats, and max length at
// round(16/13 * max_repeats) repeats. Recall: round(4/3 * max items).
std::vector<GeneralizationTest> GeneralizationTests(const ProblemSpec& spec);

// Held-out sets, drawn only from `rng`. The multi-task set samples a task
// uniformly per example and groups examples by task.
EvalSets BuildEvalSets(const ExperimentConfig& config, Rng& rng);

// Example-weighted mean bits error of the network over the set.
double EvaluateBitsError(const NetParams& params, const EvalSet& set);

struct ValidationRow {
  long step = 0;
  double target_bits_error = 0.0;
  double multi_bits_error = 0.0;
  int current_task = 0;  // flat index of C while the measured weights trained
  std::vector<double> distribution;  // task distribution at that point
};

struct TestResult {
  std::string test_name;  // "<setting>-<generalization test>"
  double bits_error = 0.0;
  long best_step = 0;
};

struct RunRecord {
  uint64_t seed = 0;
  Problem problem = Problem::kCopy;
  SyllabusKind syllabus = SyllabusKind::kNone;
  uint64_t config_hash = 0;
  std::vector<ValidationRow> rows;
  std::vector<TestResult> tests;
  bool diverged = false;
  long steps_completed = 0;

  double bits_error(const ValidationRow& row, Setting setting) const {
    return setting == Setting::kTarget ? row.target_bits_error : row.multi_bits_error;
  }
};

// Step of the row with the lowest validation error in `setting`; ties go to
// the earliest step. Throws ContractViolation on an empty record.
long SelectBest(const RunRecord& record, Setting setting);

std::string ArtifactStem(Problem problem, SyllabusKind syllabus, uint64_t seed);

// Trains one seeded run. With an artifact directory, rows are appended to
// the run CSV as they are measured and the summary, checkpoint and status
// files are written at the end.
RunRecord TrainRun(const ExperimentConfig& config, uint64_t seed,
                   const std::optional<std::filesystem::path>& artifact_dir = std::nullopt);

// True when the status file for (config, seed) exists with a matching
// config hash.
bool RunComplete(const ExperimentConfig& config, uint64_t seed,
                 const std::filesystem::path& dir);

// Reads a run back from its CSV, summary and status files.
RunRecord LoadRunRecord(const std::filesystem::path& csv_path);

// Runs seeds first_seed .. first_seed + seeds - 1 into config.out_dir,
// skipping completed runs, with up to `jobs` runs at once.
std::vector<RunRecord> RunSuite(const ExperimentConfig& config, int jobs = 1);

// Raises the allocator's mmap and trim thresholds so the large per-step
// temporaries are recycled instead of mapped and unmapped every step. A
// process-wide setting; call once before training. No-op off glibc.
void TuneAllocatorForTraining();

}  // namespace curriculum

#endif  // CURRICULUM_HARNESS_H_
