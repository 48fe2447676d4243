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

// Experiment configuration and its flat `key = value` text form.
//
// Recognized keys (one per line, '#' starts a comment):
//   problem            copy | repeat-copy | assoc-recall (resets problem
//                      dimensions to that problem's defaults)
//   vector_dim, max_length, max_repeats, success_threshold
//   syllabus           none | uniform | naive | look-back |
//                      look-back-forward | prediction-gain
//   lookback_frac, lbf_frac, bandit_gamma, bandit_alpha, reward_window,
//   reward_quantiles   "lo,hi", e.g. "0.2,0.8"
//   reward_scale       none | per-target-bit
//   layers, hidden, lr, beta1, beta2, epsilon, clip_norm
//   batch, steps, val_every, val_target_size, val_multi_size, test_size,
//   probe_size, seeds, first_seed, eval_seed, divergence_loss,
//   stop_on_target (true | false), out

#ifndef CURRICULUM_CONFIG_H_
#define CURRICULUM_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "curriculum/lstm.h"
#include "curriculum/optimizer.h"
#include "curriculum/syllabus.h"
#include "curriculum/tasks.h"

namespace curriculum {

struct ExperimentConfig {
  ProblemSpec problem = ProblemSpec::Default(Problem::kCopy);
  SyllabusConfig syllabus;
  int layers = 3;
  int hidden = 256;
  AdamConfig adam;
  double clip_norm = 10.0;
  int batch_size = 32;
  long total_steps = 20000;
  int val_every = 200;
  int val_target_size = 512;
  int val_multi_size = 1024;
  int test_size = 384;
  // Fresh examples of the current task used to decide syllabus progression.
  int probe_size = 128;
  int seeds = 10;
  uint64_t first_seed = 0;
  uint64_t eval_seed = 20170707;
  // Loss above this, or non-finite, marks a run diverged.
  double divergence_loss = 1e6;
  // End a run at the first validation whose target-task error meets the
  // problem's success threshold.
  bool stop_on_target = false;
  std::string out_dir = "runs";

  LstmShape model_shape() const;

  // Throws std::invalid_argument on an invalid field.
  void Validate() const;

  // Every key in canonical order, full precision.
  std::string ToText() const;

  // FNV-1a over ToText() without the keys that do not affect a run's
  // results (out, seeds, first_seed).
  uint64_t Hash() const;
};

// Sets one key. Throws std::invalid_argument for an unknown key or a
// malformed value.
void SetConfigValue(ExperimentConfig& config, std::string_view key, std::string_view value);

// Applies `key = value` lines; a `problem` line is applied before the rest.
void ApplyConfigText(ExperimentConfig& config, std::string_view text);
void ApplyConfigFile(ExperimentConfig& config, const std::filesystem::path& path);

std::string HashToHex(uint64_t hash);

}  // namespace curriculum

#endif  // CURRICULUM_CONFIG_H_
