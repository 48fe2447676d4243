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

// Command-line front end.
//
//   curriculum run --problem copy --syllabus naive --seeds 10 --steps 20000 \
//       --hidden 256 --layers 3 --lr 0.01 --batch 32 --val-every 200 --out runs
//   curriculum report --in runs --out report

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curriculum/config.h"
#include "curriculum/harness.h"
#include "curriculum/reporting.h"

namespace {

using curriculum::ExperimentConfig;

struct RunFlags {
  std::optional<std::string> problem;
  std::optional<std::string> syllabus;
  std::optional<int> seeds;
  std::optional<long> steps;
  std::optional<int> hidden;
  std::optional<int> layers;
  std::optional<double> lr;
  std::optional<int> batch;
  std::optional<int> val_every;
  std::optional<std::string> out;
  std::optional<std::string> config_file;
  std::optional<int> max_length;
  std::optional<int> max_repeats;
  std::optional<uint64_t> first_seed;
  std::vector<std::string> overrides;
  bool stop_on_target = false;
  bool print_config = false;
  int jobs = 1;
};

ExperimentConfig BuildConfig(const RunFlags& flags) {
  ExperimentConfig config;
  if (flags.config_file) curriculum::ApplyConfigFile(config, *flags.config_file);
  if (flags.problem &&
      curriculum::ParseProblem(*flags.problem) != config.problem.problem) {
    curriculum::SetConfigValue(config, "problem", *flags.problem);
  }
  auto set = [&config](const char* key, const auto& value) {
    if (value) curriculum::SetConfigValue(config, key, std::to_string(*value));
  };
  if (flags.syllabus) curriculum::SetConfigValue(config, "syllabus", *flags.syllabus);
  set("seeds", flags.seeds);
  set("steps", flags.steps);
  set("hidden", flags.hidden);
  set("layers", flags.layers);
  set("batch", flags.batch);
  set("val_every", flags.val_every);
  set("max_length", flags.max_length);
  set("max_repeats", flags.max_repeats);
  set("first_seed", flags.first_seed);
  if (flags.lr) config.adam.lr = *flags.lr;
  if (flags.out) config.out_dir = *flags.out;
  if (flags.stop_on_target) config.stop_on_target = true;
  for (const std::string& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
    curriculum::SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.Validate();
  return config;
}

int Run(const RunFlags& flags) {
  const ExperimentConfig config = BuildConfig(flags);
  if (flags.print_config) {
    std::cout << config.ToText();
    return 0;
  }
  std::cerr << "config hash " << curriculum::HashToHex(config.Hash()) << ", "
            << config.seeds << " seed(s) into " << config.out_dir << "\n";
  const auto records = curriculum::RunSuite(config, flags.jobs);
  for (const auto& record : records) {
    std::cout << "seed " << record.seed << (record.diverged ? " diverged" : " ok")
              << " steps " << record.steps_completed;
    if (!record.rows.empty()) {
      const auto& last = record.rows.back();
      std::cout << " target " << last.target_bits_error << " multi " << last.multi_bits_error;
    }
    std::cout << "\n";
  }
  return 0;
}

int Report(const std::string& in_dir, const std::string& out_dir) {
  const auto records = curriculum::LoadRunRecords(in_dir);
  if (records.empty()) {
    std::cerr << "no completed runs in " << in_dir << "\n";
    return 1;
  }
  for (const auto& path : curriculum::EmitReport(records, out_dir)) {
    std::cout << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  curriculum::TuneAllocatorForTraining();
  CLI::App app{"Curriculum learning syllabus experiments"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run = app.add_subcommand("run", "Train all seeds of one (problem, syllabus) pair");
  run->add_option("--problem", flags.problem, "copy | repeat-copy | assoc-recall");
  run->add_option("--syllabus", flags.syllabus,
                  "none | uniform | naive | look-back | look-back-forward | prediction-gain");
  run->add_option("--seeds", flags.seeds, "number of seeds");
  run->add_option("--steps", flags.steps, "training steps per run");
  run->add_option("--hidden", flags.hidden, "LSTM units per layer");
  run->add_option("--layers", flags.layers, "stacked LSTM layers");
  run->add_option("--lr", flags.lr, "Adam learning rate");
  run->add_option("--batch", flags.batch, "batch size");
  run->add_option("--val-every", flags.val_every, "steps between validations");
  run->add_option("--out", flags.out, "output directory");
  run->add_option("--config", flags.config_file, "flat key = value config file");
  run->add_option("--max-length", flags.max_length, "largest training length / item count");
  run->add_option("--max-repeats", flags.max_repeats, "largest repeat count (repeat-copy)");
  run->add_option("--first-seed", flags.first_seed, "first seed of the suite");
  run->add_option("--set", flags.overrides, "extra key=value config overrides");
  run->add_option("--jobs", flags.jobs, "runs to train concurrently");
  run->add_flag("--stop-on-target", flags.stop_on_target,
                "stop a run once the target task meets its success threshold");
  run->add_flag("--print-config", flags.print_config, "print the resolved config and exit");

  std::string report_in;
  std::string report_out = "report";
  CLI::App* report = app.add_subcommand("report", "Aggregate completed runs into tables and plots");
  report->add_option("--in", report_in, "directory holding run artifacts")->required();
  report->add_option("--out", report_out, "report output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return Run(flags);
    if (*report) return Report(report_in, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
