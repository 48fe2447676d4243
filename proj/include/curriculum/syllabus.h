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

// Syllabuses: which task supplies the next training batch.
//
//   kind                 mass on C      previous tasks   all tasks   target T
//   None                     -               -               -         100%
//   Uniform                  -               -             100%          -
//   Naive                  100%              -               -           -
//   LookBack          1 - lookback      lookback             -           -
//   LookBackAndForward  1 - lbf              -              lbf          -
//   PredictionGain     (Exp3.S bandit over all tasks)
//
// Hand-crafted syllabuses (Naive, LookBack, LookBackAndForward) advance C by
// doubling one difficulty coordinate each time the current task is solved.

#ifndef CURRICULUM_SYLLABUS_H_
#define CURRICULUM_SYLLABUS_H_

#include <optional>
#include <string_view>
#include <vector>

#include "curriculum/bandit.h"
#include "curriculum/tasks.h"

namespace curriculum {

enum class SyllabusKind {
  kNone,
  kUniform,
  kNaive,
  kLookBack,
  kLookBackAndForward,
  kPredictionGain,
};

// "none", "uniform", "naive", "look-back", "look-back-forward",
// "prediction-gain".
std::string_view SyllabusName(SyllabusKind kind);
SyllabusKind ParseSyllabus(std::string_view name);
bool IsHandCrafted(SyllabusKind kind);

struct SyllabusConfig {
  SyllabusKind kind = SyllabusKind::kNone;
  double lookback_frac = 0.10;
  double lbf_frac = 0.20;
  double bandit_gamma = 0.3;
  // 0 selects 1 / total_steps.
  double bandit_alpha = 0.0;
  int reward_window = 10000;
  double reward_quantile_low = 0.2;
  double reward_quantile_high = 0.8;
  RewardScale reward_scale = RewardScale::kPerTargetBit;

  void Validate() const;
};

enum class Dimension { kLength, kRepeats };

struct SyllabusState {
  TaskId current;
  int num_tasks = 0;
  Dimension next_dimension = Dimension::kLength;
  std::optional<BanditState> bandit;
};

// Probability per flat task index 1..T, stored at [flat - 1].
struct TaskDistribution {
  std::vector<double> probabilities;

  int num_tasks() const { return static_cast<int>(probabilities.size()); }
  double at(int flat) const { return probabilities.at(flat - 1); }
};

// C starts at the easiest task (the hardest for None, which has no
// progression); PredictionGain gets a fresh bandit.
SyllabusState InitialState(const SyllabusConfig& config, const ProblemSpec& spec,
                           long total_steps);

// Closed-form distribution for every kind except PredictionGain (throws
// ContractViolation for it).
TaskDistribution Distribution(const SyllabusConfig& config, const SyllabusState& state,
                              const ProblemSpec& spec);

// Distribution for any kind, reading the bandit for PredictionGain.
TaskDistribution CurrentDistribution(const SyllabusConfig& config,
                                     const SyllabusState& state, const ProblemSpec& spec);

// Draws a flat task index in 1..T.
int SampleTask(const TaskDistribution& dist, Rng& rng);

// Advances C after a validation of the current task: when the error is at
// most spec.success_threshold, doubles the coordinate named by
// next_dimension (clamped to its maximum) and, for RepeatCopy, alternates the
// dimension. A dimension already at its maximum yields to the other one.
SyllabusState Progress(const SyllabusState& state, double validation_bits_error,
                       const ProblemSpec& spec);

// Single-owner driver used by the training loop.
class Syllabus {
 public:
  Syllabus(const SyllabusConfig& config, const ProblemSpec& spec, long total_steps);

  const SyllabusConfig& config() const { return config_; }
  const SyllabusState& state() const { return state_; }

  int NextTask(Rng& rng) const;
  TaskDistribution distribution() const;
  int current_flat() const;

  // Feeds a Prediction Gain observation for the batch drawn from `flat`.
  // Returns the scaled reward; no-op (returns 0) for other kinds.
  double ObserveTrainingStep(int flat, double loss_before, double loss_after,
                             int masked_bits);

  // Applies Progress for hand-crafted kinds; returns true if C moved.
  bool ObserveValidation(double current_task_bits_error);

 private:
  SyllabusConfig config_;
  ProblemSpec spec_;
  SyllabusState state_;
};

}  // namespace curriculum

#endif  // CURRICULUM_SYLLABUS_H_
