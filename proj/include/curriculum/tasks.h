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

// Synthetic sequence problems (Copy, Repeat Copy, Associative Recall):
// example generation at an exact difficulty coordinate and bit-error scoring.
//
// Channel layouts:
//   Copy               input  [0,dim) payload, [dim] delimiter
//                      target [0,dim) payload
//   RepeatCopy         input  [0,dim) payload, [dim] delimiter,
//                             [dim+1] repeat scalar r / repeat_norm
//                      target [0,dim) payload, [dim] end marker
//   AssociativeRecall  input  [0,dim) payload, [dim] item delimiter,
//                             [dim+1] query delimiter
//                      target [0,dim) payload

#ifndef CURRICULUM_TASKS_H_
#define CURRICULUM_TASKS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curriculum/common.h"

namespace curriculum {

enum class Problem { kCopy, kRepeatCopy, kAssociativeRecall };

// "copy", "repeat-copy", "assoc-recall".
std::string_view ProblemName(Problem problem);
Problem ParseProblem(std::string_view name);

struct ProblemSpec {
  Problem problem = Problem::kCopy;
  int vector_dim = 8;
  int max_length = 32;  // sequence length, or item count for recall
  int max_repeats = 1;  // RepeatCopy only
  double success_threshold = 2.0;
  // Denominator of the repeat scalar; 0 means max_repeats. Generalization
  // sets raise max_repeats but keep the training normalization.
  int repeat_norm = 0;

  // Paper-scale defaults for each problem.
  static ProblemSpec Default(Problem problem);

  int input_dim() const;
  int target_dim() const;
  int min_length() const { return problem == Problem::kAssociativeRecall ? 2 : 1; }
  int repeat_denominator() const { return repeat_norm > 0 ? repeat_norm : max_repeats; }

  // Throws std::invalid_argument on a violated invariant.
  void Validate() const;
};

// An exact difficulty coordinate. `repeats` is 1 except for RepeatCopy.
struct TaskId {
  int length = 1;
  int repeats = 1;

  friend bool operator==(const TaskId&, const TaskId&) = default;
};

std::string ToString(const TaskId& task);

// The task grid, flattened to 1..T. Copy: flat = length. Recall: flat =
// items - 1 (position 1 holds two items). RepeatCopy: row-major over
// (length, repeats).
int NumTasks(const ProblemSpec& spec);
int FlatIndex(const ProblemSpec& spec, const TaskId& task);
TaskId TaskAt(const ProblemSpec& spec, int flat);
TaskId EasiestTask(const ProblemSpec& spec);
TaskId HardestTask(const ProblemSpec& spec);

// Batched examples from one task. Arrays are row-major
// [batch x time x channels]; the mask is [batch x time].
struct ExampleBatch {
  int batch = 0;
  int time = 0;
  int input_dim = 0;
  int target_dim = 0;
  TaskId task;
  AlignedVector inputs;
  AlignedVector targets;
  std::vector<uint8_t> loss_mask;

  double& input(int b, int t, int d) {
    return inputs[(static_cast<size_t>(b) * time + t) * input_dim + d];
  }
  double input(int b, int t, int d) const {
    return inputs[(static_cast<size_t>(b) * time + t) * input_dim + d];
  }
  double& target(int b, int t, int d) {
    return targets[(static_cast<size_t>(b) * time + t) * target_dim + d];
  }
  double target(int b, int t, int d) const {
    return targets[(static_cast<size_t>(b) * time + t) * target_dim + d];
  }
  bool masked(int b, int t) const {
    return loss_mask[static_cast<size_t>(b) * time + t] != 0;
  }

  // Masked target bits in one sequence.
  int MaskedBitsPerSequence() const;
};

// Number of timesteps and masked response steps for a task.
int SequenceTime(const ProblemSpec& spec, const TaskId& task);
int ResponseSteps(const ProblemSpec& spec, const TaskId& task);

// Generators throw std::out_of_range for a coordinate outside the spec.
ExampleBatch GenerateCopy(const TaskId& task, int batch, const ProblemSpec& spec, Rng& rng);
ExampleBatch GenerateRepeatCopy(const TaskId& task, int batch, const ProblemSpec& spec,
                                Rng& rng);
ExampleBatch GenerateAssociativeRecall(const TaskId& task, int batch,
                                       const ProblemSpec& spec, Rng& rng);
// Dispatches on spec.problem.
ExampleBatch Generate(const TaskId& task, int batch, const ProblemSpec& spec, Rng& rng);

// Mean over the batch of masked bits where (output > 0.5) != target.
// `outputs` has the layout of batch.targets.
double BitsError(std::span<const double> outputs, const ExampleBatch& batch);

}  // namespace curriculum

#endif  // CURRICULUM_TASKS_H_
