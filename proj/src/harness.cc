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

#include "curriculum/harness.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "curriculum/checkpoint.h"
#include "curriculum/optimizer.h"
#include "curriculum/syllabus.h"

namespace curriculum {
namespace {

namespace fs = std::filesystem;

// Stream ids for MakeRng; the evaluation stream is keyed by eval_seed.
constexpr uint64_t kInitStream = 1;
constexpr uint64_t kTrainStream = 2;
constexpr uint64_t kSyllabusStream = 3;
constexpr uint64_t kProbeStream = 4;

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void AppendBatches(EvalSet& set, const ProblemSpec& spec, const TaskId& task, int count,
                   int batch_size, Rng& rng) {
  while (count > 0) {
    const int n = std::min(count, batch_size);
    set.batches.push_back(Generate(task, n, spec, rng));
    count -= n;
  }
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::map<std::string, std::string> ReadStatus(const fs::path& path) {
  std::map<std::string, std::string> status;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) status[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return status;
}

fs::path WithSuffix(const fs::path& dir, const std::string& stem, const std::string& suffix) {
  return dir / (stem + suffix);
}

// Owns the incremental CSV output of one run.
class RunWriter {
 public:
  RunWriter(const fs::path& dir, const ExperimentConfig& config, uint64_t seed)
      : dir_(dir),
        stem_(ArtifactStem(config.problem.problem, config.syllabus.kind, seed)),
        seed_(seed),
        problem_(ProblemName(config.problem.problem)),
        syllabus_(SyllabusName(config.syllabus.kind)) {
    fs::create_directories(dir_);
    fs::remove(WithSuffix(dir_, stem_, ".status"));
    csv_.open(WithSuffix(dir_, stem_, ".csv"), std::ios::trunc);
    if (!csv_) throw std::runtime_error("cannot write " + WithSuffix(dir_, stem_, ".csv").string());
    csv_ << "step,seed,problem,syllabus,setting,bits_error,current_task_flat_index\n";
    csv_.flush();
  }

  void AppendRow(const ValidationRow& row) {
    for (Setting setting : {Setting::kTarget, Setting::kMulti}) {
      const double error =
          setting == Setting::kTarget ? row.target_bits_error : row.multi_bits_error;
      csv_ << row.step << ',' << seed_ << ',' << problem_ << ',' << syllabus_ << ','
           << SettingName(setting) << ',' << FormatDouble(error) << ',' << row.current_task
           << '\n';
    }
    csv_.flush();
  }

  void Finish(const RunRecord& record, const std::optional<Checkpoint>& best) {
    csv_.close();
    {
      std::ofstream summary(WithSuffix(dir_, stem_, "_summary.csv"), std::ios::trunc);
      summary << "test_name,bits_error,best_step\n";
      for (const TestResult& test : record.tests) {
        summary << test.test_name << ',' << FormatDouble(test.bits_error) << ','
                << test.best_step << '\n';
      }
      if (!summary) throw std::runtime_error("failed writing run summary in " + dir_.string());
    }
    if (best) SaveCheckpoint(*best, WithSuffix(dir_, stem_, "_best.ckpt"));
    std::ofstream status(WithSuffix(dir_, stem_, ".status"), std::ios::trunc);
    status << "status = " << (record.diverged ? "diverged" : "ok") << '\n'
           << "config_hash = " << HashToHex(record.config_hash) << '\n'
           << "seed = " << record.seed << '\n'
           << "problem = " << problem_ << '\n'
           << "syllabus = " << syllabus_ << '\n'
           << "steps_completed = " << record.steps_completed << '\n';
    if (!status) throw std::runtime_error("failed writing run status in " + dir_.string());
  }

 private:
  fs::path dir_;
  std::string stem_;
  uint64_t seed_;
  std::string problem_;
  std::string syllabus_;
  std::ofstream csv_;
};

struct BestSnapshot {
  double error = std::numeric_limits<double>::infinity();
  long step = 0;
  NetParams params;
  AdamState adam;
};

}  // namespace

std::string_view SettingName(Setting setting) {
  return setting == Setting::kTarget ? "target" : "multi";
}

Setting ParseSetting(std::string_view name) {
  if (name == "target") return Setting::kTarget;
  if (name == "multi") return Setting::kMulti;
  throw std::invalid_argument("unknown setting '" + std::string(name) + "'");
}

int EvalSet::examples() const {
  int total = 0;
  for (const ExampleBatch& batch : batches) total += batch.batch;
  return total;
}

std::vector<GeneralizationTest> GeneralizationTests(const ProblemSpec& spec) {
  auto scaled = [](int value, double factor) {
    return static_cast<int>(std::lround(value * factor));
  };
  std::vector<GeneralizationTest> tests;
  switch (spec.problem) {
    case Problem::kCopy: {
      GeneralizationTest test{"", spec, {scaled(spec.max_length, 1.25), 1}};
      test.spec.max_length = std::max(spec.max_length, test.task.length);
      test.name = "len" + std::to_string(test.task.length);
      tests.push_back(test);
      break;
    }
    case Problem::kRepeatCopy: {
      const double factor = 16.0 / 13.0;
      for (TaskId task : {TaskId{scaled(spec.max_length, factor), spec.max_repeats},
                          TaskId{spec.max_length, scaled(spec.max_repeats, factor)}}) {
        GeneralizationTest test{"", spec, task};
        test.spec.max_length = std::max(spec.max_length, task.length);
        test.spec.max_repeats = std::max(spec.max_repeats, task.repeats);
        test.spec.repeat_norm = spec.repeat_denominator();
        test.name = "len" + std::to_string(task.length) + "-rep" + std::to_string(task.repeats);
        tests.push_back(test);
      }
      break;
    }
    case Problem::kAssociativeRecall: {
      GeneralizationTest test{"", spec, {scaled(spec.max_length, 4.0 / 3.0), 1}};
      test.spec.max_length = std::max(spec.max_length, test.task.length);
      test.name = "items" + std::to_string(test.task.length);
      tests.push_back(test);
      break;
    }
  }
  return tests;
}

EvalSets BuildEvalSets(const ExperimentConfig& config, Rng& rng) {
  const ProblemSpec& spec = config.problem;
  const int batch = config.batch_size;
  EvalSets sets;
  sets.val_target.name = "val-target";
  AppendBatches(sets.val_target, spec, HardestTask(spec), config.val_target_size, batch, rng);

  sets.val_multi.name = "val-multi";
  const int total = NumTasks(spec);
  std::vector<int> counts(total, 0);
  std::uniform_int_distribution<int> pick(0, total - 1);
  for (int i = 0; i < config.val_multi_size; ++i) ++counts[pick(rng)];
  for (int flat = 1; flat <= total; ++flat) {
    AppendBatches(sets.val_multi, spec, TaskAt(spec, flat), counts[flat - 1], batch, rng);
  }

  for (const GeneralizationTest& test : GeneralizationTests(spec)) {
    EvalSet set;
    set.name = test.name;
    AppendBatches(set, test.spec, test.task, config.test_size, batch, rng);
    sets.tests.push_back(std::move(set));
  }
  return sets;
}

double EvaluateBitsError(const NetParams& params, const EvalSet& set) {
  double total = 0.0;
  for (const ExampleBatch& batch : set.batches) {
    const ForwardTrace trace = Forward(params, batch);
    total += BitsError(Sigmoid(trace.logit_values()), batch) * batch.batch;
  }
  return total / set.examples();
}

long SelectBest(const RunRecord& record, Setting setting) {
  if (record.rows.empty()) throw ContractViolation("select_best on a record without rows");
  const ValidationRow* best = &record.rows.front();
  for (const ValidationRow& row : record.rows) {
    if (record.bits_error(row, setting) < record.bits_error(*best, setting)) best = &row;
  }
  return best->step;
}

std::string ArtifactStem(Problem problem, SyllabusKind syllabus, uint64_t seed) {
  return std::string(ProblemName(problem)) + "_" + std::string(SyllabusName(syllabus)) +
         "_seed" + std::to_string(seed);
}

RunRecord TrainRun(const ExperimentConfig& config, uint64_t seed,
                   const std::optional<fs::path>& artifact_dir) {
  config.Validate();
  const ProblemSpec& spec = config.problem;
  const LstmShape shape = config.model_shape();

  RunRecord record;
  record.seed = seed;
  record.problem = spec.problem;
  record.syllabus = config.syllabus.kind;
  record.config_hash = config.Hash();

  Rng eval_rng = MakeRng(config.eval_seed, seed);
  Rng init_rng = MakeRng(seed, kInitStream);
  Rng train_rng = MakeRng(seed, kTrainStream);
  Rng syllabus_rng = MakeRng(seed, kSyllabusStream);
  Rng probe_rng = MakeRng(seed, kProbeStream);

  const EvalSets sets = BuildEvalSets(config, eval_rng);
  NetParams params = InitParams(shape, init_rng);
  AdamState adam(shape, config.adam);
  Syllabus syllabus(config.syllabus, spec, config.total_steps);

  std::optional<RunWriter> writer;
  if (artifact_dir) writer.emplace(*artifact_dir, config, seed);

  BestSnapshot best[2];  // indexed by Setting
  auto diverged = [&record] { record.diverged = true; };

  for (long step = 1; step <= config.total_steps; ++step) {
    const int flat = syllabus.NextTask(syllabus_rng);
    const TaskId task = TaskAt(spec, flat);
    const ExampleBatch batch = Generate(task, config.batch_size, spec, train_rng);
    if (!(batch.task == task)) throw std::logic_error("training batch mixes tasks");

    try {
      const ForwardTrace trace = Forward(params, batch);
      const double loss_before = Loss(trace.logit_values(), batch);
      if (!std::isfinite(loss_before) || loss_before > config.divergence_loss) {
        diverged();
        break;
      }
      NetParams grads = Backward(params, trace, batch);
      ClipGradients(grads, config.clip_norm);
      AdamStep(params, grads, adam);
      if (config.syllabus.kind == SyllabusKind::kPredictionGain) {
        const double loss_after = Loss(Forward(params, batch).logit_values(), batch);
        syllabus.ObserveTrainingStep(flat, loss_before, loss_after,
                                     batch.MaskedBitsPerSequence());
      }
    } catch (const NumericFault&) {
      diverged();
      break;
    }
    record.steps_completed = step;

    if (step % config.val_every != 0) continue;
    ValidationRow row;
    row.step = step;
    row.current_task = syllabus.current_flat();
    row.distribution = syllabus.distribution().probabilities;
    try {
      row.target_bits_error = EvaluateBitsError(params, sets.val_target);
      row.multi_bits_error = EvaluateBitsError(params, sets.val_multi);
    } catch (const NumericFault&) {
      diverged();
      break;
    }
    record.rows.push_back(row);
    if (writer) writer->AppendRow(row);

    for (Setting setting : {Setting::kTarget, Setting::kMulti}) {
      BestSnapshot& snap = best[static_cast<int>(setting)];
      const double error = record.bits_error(row, setting);
      if (error < snap.error) {
        snap.error = error;
        snap.step = step;
        snap.params = params;
        snap.adam = adam;
      }
    }

    if (IsHandCrafted(config.syllabus.kind)) {
      EvalSet probe;
      probe.batches.push_back(
          Generate(syllabus.state().current, config.probe_size, spec, probe_rng));
      try {
        syllabus.ObserveValidation(EvaluateBitsError(params, probe));
      } catch (const NumericFault&) {
        diverged();
        break;
      }
    }
    if (config.stop_on_target && row.target_bits_error <= spec.success_threshold) break;
  }

  for (Setting setting : {Setting::kTarget, Setting::kMulti}) {
    const BestSnapshot& snap = best[static_cast<int>(setting)];
    if (snap.step == 0) continue;
    for (const EvalSet& test : sets.tests) {
      TestResult result;
      result.test_name = std::string(SettingName(setting)) + "-" + test.name;
      result.best_step = snap.step;
      try {
        result.bits_error = EvaluateBitsError(snap.params, test);
      } catch (const NumericFault&) {
        result.bits_error = std::numeric_limits<double>::infinity();
      }
      record.tests.push_back(result);
    }
  }

  if (writer) {
    std::optional<Checkpoint> checkpoint;
    const BestSnapshot& snap = best[static_cast<int>(Setting::kTarget)];
    if (snap.step > 0) checkpoint = Checkpoint{record.config_hash, snap.step, snap.params, snap.adam};
    writer->Finish(record, checkpoint);
  }
  return record;
}

bool RunComplete(const ExperimentConfig& config, uint64_t seed, const fs::path& dir) {
  const std::string stem = ArtifactStem(config.problem.problem, config.syllabus.kind, seed);
  const fs::path status_path = WithSuffix(dir, stem, ".status");
  if (!fs::exists(status_path)) return false;
  const auto status = ReadStatus(status_path);
  const auto it = status.find("config_hash");
  return it != status.end() && it->second == HashToHex(config.Hash());
}

RunRecord LoadRunRecord(const fs::path& csv_path) {
  const fs::path dir = csv_path.parent_path();
  const std::string stem = csv_path.stem().string();
  const auto status = ReadStatus(WithSuffix(dir, stem, ".status"));
  if (status.empty()) throw std::runtime_error("run is incomplete: " + csv_path.string());

  RunRecord record;
  record.seed = std::stoull(status.at("seed"));
  record.problem = ParseProblem(status.at("problem"));
  record.syllabus = ParseSyllabus(status.at("syllabus"));
  record.config_hash = std::stoull(status.at("config_hash"), nullptr, 16);
  record.diverged = status.at("status") == "diverged";
  record.steps_completed = std::stol(status.at("steps_completed"));

  std::ifstream csv(csv_path);
  std::string line;
  std::getline(csv, line);
  if (line != "step,seed,problem,syllabus,setting,bits_error,current_task_flat_index") {
    throw StructuralError("unexpected run CSV header in " + csv_path.string());
  }
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != 7) throw StructuralError("malformed run CSV line: " + line);
    const long step = std::stol(fields[0]);
    if (record.rows.empty() || record.rows.back().step != step) {
      record.rows.push_back({});
      record.rows.back().step = step;
    }
    ValidationRow& row = record.rows.back();
    const double error = std::strtod(fields[5].c_str(), nullptr);
    if (ParseSetting(fields[4]) == Setting::kTarget) {
      row.target_bits_error = error;
    } else {
      row.multi_bits_error = error;
    }
    row.current_task = std::stoi(fields[6]);
  }

  std::ifstream summary(WithSuffix(dir, stem, "_summary.csv"));
  std::getline(summary, line);
  while (std::getline(summary, line)) {
    if (line.empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != 3) throw StructuralError("malformed summary line: " + line);
    record.tests.push_back(
        {fields[0], std::strtod(fields[1].c_str(), nullptr), std::stol(fields[2])});
  }
  return record;
}

void TuneAllocatorForTraining() {
#if defined(__GLIBC__)
  constexpr int kThreshold = 256 << 20;
  mallopt(M_MMAP_THRESHOLD, kThreshold);
  mallopt(M_TRIM_THRESHOLD, kThreshold);
#endif
}

std::vector<RunRecord> RunSuite(const ExperimentConfig& config, int jobs) {
  config.Validate();
  const fs::path dir = config.out_dir;
  fs::create_directories(dir);
  std::vector<RunRecord> records(config.seeds);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (int i = next++; i < config.seeds; i = next++) {
      const uint64_t seed = config.first_seed + static_cast<uint64_t>(i);
      try {
        if (!RunComplete(config, seed, dir)) TrainRun(config, seed, dir);
        const std::string stem = ArtifactStem(config.problem.problem, config.syllabus.kind, seed);
        records[i] = LoadRunRecord(WithSuffix(dir, stem, ".csv"));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(jobs, config.seeds));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return records;
}

}  // namespace curriculum
