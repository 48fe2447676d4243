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

#include "curriculum/tasks.h"

#include <stdexcept>

namespace curriculum {
namespace {

constexpr int kItemVectors = 3;

ExampleBatch MakeBatch(const ProblemSpec& spec, const TaskId& task, int batch) {
  if (batch < 1) throw std::invalid_argument("batch size must be positive");
  ExampleBatch out;
  out.batch = batch;
  out.time = SequenceTime(spec, task);
  out.input_dim = spec.input_dim();
  out.target_dim = spec.target_dim();
  out.task = task;
  out.inputs.assign(static_cast<size_t>(batch) * out.time * out.input_dim, 0.0);
  out.targets.assign(static_cast<size_t>(batch) * out.time * out.target_dim, 0.0);
  out.loss_mask.assign(static_cast<size_t>(batch) * out.time, 0);
  const int response = ResponseSteps(spec, task);
  for (int b = 0; b < batch; ++b) {
    for (int t = out.time - response; t < out.time; ++t) {
      out.loss_mask[static_cast<size_t>(b) * out.time + t] = 1;
    }
  }
  return out;
}

void CheckLength(const ProblemSpec& spec, const TaskId& task) {
  if (task.length < spec.min_length() || task.length > spec.max_length) {
    throw std::out_of_range("task length " + std::to_string(task.length) +
                            " outside [" + std::to_string(spec.min_length()) + ", " +
                            std::to_string(spec.max_length) + "]");
  }
}

void CheckRepeats(const ProblemSpec& spec, const TaskId& task) {
  const int max = spec.problem == Problem::kRepeatCopy ? spec.max_repeats : 1;
  if (task.repeats < 1 || task.repeats > max) {
    throw std::out_of_range("task repeats " + std::to_string(task.repeats) +
                            " outside [1, " + std::to_string(max) + "]");
  }
}

double RandomBit(Rng& rng) { return static_cast<double>(rng() >> 63); }

}  // namespace

std::string_view ProblemName(Problem problem) {
  switch (problem) {
    case Problem::kCopy:
      return "copy";
    case Problem::kRepeatCopy:
      return "repeat-copy";
    case Problem::kAssociativeRecall:
      return "assoc-recall";
  }
  return "unknown";
}

Problem ParseProblem(std::string_view name) {
  if (name == "copy") return Problem::kCopy;
  if (name == "repeat-copy") return Problem::kRepeatCopy;
  if (name == "assoc-recall") return Problem::kAssociativeRecall;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

ProblemSpec ProblemSpec::Default(Problem problem) {
  ProblemSpec spec;
  spec.problem = problem;
  switch (problem) {
    case Problem::kCopy:
      spec.vector_dim = 8;
      spec.max_length = 32;
      spec.max_repeats = 1;
      spec.success_threshold = 2.0;
      break;
    case Problem::kRepeatCopy:
      spec.vector_dim = 8;
      spec.max_length = 13;
      spec.max_repeats = 13;
      spec.success_threshold = 1.0;
      break;
    case Problem::kAssociativeRecall:
      spec.vector_dim = 6;
      spec.max_length = 12;
      spec.max_repeats = 1;
      spec.success_threshold = 1.0;
      break;
  }
  return spec;
}

int ProblemSpec::input_dim() const {
  return problem == Problem::kCopy ? vector_dim + 1 : vector_dim + 2;
}

int ProblemSpec::target_dim() const {
  return problem == Problem::kRepeatCopy ? vector_dim + 1 : vector_dim;
}

void ProblemSpec::Validate() const {
  if (vector_dim < 1) throw std::invalid_argument("vector_dim must be positive");
  if (max_length < min_length()) {
    throw std::invalid_argument("max_length must be at least " +
                                std::to_string(min_length()));
  }
  if (max_repeats < 1) throw std::invalid_argument("max_repeats must be positive");
  if (problem != Problem::kRepeatCopy && max_repeats != 1) {
    throw std::invalid_argument("max_repeats applies to repeat-copy only");
  }
  if (repeat_norm < 0) throw std::invalid_argument("repeat_norm must be non-negative");
  if (!(success_threshold > 0.0)) {
    throw std::invalid_argument("success_threshold must be positive");
  }
}

std::string ToString(const TaskId& task) {
  return "(" + std::to_string(task.length) + "," + std::to_string(task.repeats) + ")";
}

int NumTasks(const ProblemSpec& spec) {
  switch (spec.problem) {
    case Problem::kCopy:
      return spec.max_length;
    case Problem::kRepeatCopy:
      return spec.max_length * spec.max_repeats;
    case Problem::kAssociativeRecall:
      return spec.max_length - 1;
  }
  return 0;
}

int FlatIndex(const ProblemSpec& spec, const TaskId& task) {
  CheckLength(spec, task);
  CheckRepeats(spec, task);
  switch (spec.problem) {
    case Problem::kCopy:
      return task.length;
    case Problem::kRepeatCopy:
      return (task.length - 1) * spec.max_repeats + task.repeats;
    case Problem::kAssociativeRecall:
      return task.length - 1;
  }
  return 0;
}

TaskId TaskAt(const ProblemSpec& spec, int flat) {
  if (flat < 1 || flat > NumTasks(spec)) {
    throw std::out_of_range("flat task index " + std::to_string(flat) + " outside [1, " +
                            std::to_string(NumTasks(spec)) + "]");
  }
  switch (spec.problem) {
    case Problem::kCopy:
      return {flat, 1};
    case Problem::kRepeatCopy:
      return {(flat - 1) / spec.max_repeats + 1, (flat - 1) % spec.max_repeats + 1};
    case Problem::kAssociativeRecall:
      return {flat + 1, 1};
  }
  return {};
}

TaskId EasiestTask(const ProblemSpec& spec) { return {spec.min_length(), 1}; }

TaskId HardestTask(const ProblemSpec& spec) {
  return {spec.max_length, spec.problem == Problem::kRepeatCopy ? spec.max_repeats : 1};
}

int SequenceTime(const ProblemSpec& spec, const TaskId& task) {
  const int n = task.length;
  switch (spec.problem) {
    case Problem::kCopy:
      return 2 * n + 1;
    case Problem::kRepeatCopy:
      return n + 1 + task.repeats * n + 1;
    case Problem::kAssociativeRecall:
      return n * (kItemVectors + 1) + 2 + kItemVectors + kItemVectors;
  }
  return 0;
}

int ResponseSteps(const ProblemSpec& spec, const TaskId& task) {
  switch (spec.problem) {
    case Problem::kCopy:
      return task.length;
    case Problem::kRepeatCopy:
      return task.repeats * task.length + 1;
    case Problem::kAssociativeRecall:
      return kItemVectors;
  }
  return 0;
}

int ExampleBatch::MaskedBitsPerSequence() const {
  int steps = 0;
  for (int t = 0; t < time; ++t) steps += masked(0, t) ? 1 : 0;
  return steps * target_dim;
}

ExampleBatch GenerateCopy(const TaskId& task, int batch, const ProblemSpec& spec,
                          Rng& rng) {
  if (spec.problem != Problem::kCopy) throw std::invalid_argument("spec is not copy");
  CheckLength(spec, task);
  CheckRepeats(spec, task);
  ExampleBatch out = MakeBatch(spec, task, batch);
  const int n = task.length;
  const int dim = spec.vector_dim;
  for (int b = 0; b < batch; ++b) {
    for (int t = 0; t < n; ++t) {
      for (int d = 0; d < dim; ++d) {
        const double bit = RandomBit(rng);
        out.input(b, t, d) = bit;
        out.target(b, n + 1 + t, d) = bit;
      }
    }
    out.input(b, n, dim) = 1.0;
  }
  return out;
}

ExampleBatch GenerateRepeatCopy(const TaskId& task, int batch, const ProblemSpec& spec,
                                Rng& rng) {
  if (spec.problem != Problem::kRepeatCopy) {
    throw std::invalid_argument("spec is not repeat-copy");
  }
  CheckLength(spec, task);
  CheckRepeats(spec, task);
  ExampleBatch out = MakeBatch(spec, task, batch);
  const int n = task.length;
  const int reps = task.repeats;
  const int dim = spec.vector_dim;
  const double scalar = static_cast<double>(reps) / spec.repeat_denominator();
  for (int b = 0; b < batch; ++b) {
    for (int t = 0; t < n; ++t) {
      for (int d = 0; d < dim; ++d) {
        const double bit = RandomBit(rng);
        out.input(b, t, d) = bit;
        for (int r = 0; r < reps; ++r) out.target(b, n + 1 + r * n + t, d) = bit;
      }
    }
    out.input(b, n, dim) = 1.0;
    out.input(b, n, dim + 1) = scalar;
    out.target(b, out.time - 1, dim) = 1.0;
  }
  return out;
}

ExampleBatch GenerateAssociativeRecall(const TaskId& task, int batch,
                                       const ProblemSpec& spec, Rng& rng) {
  if (spec.problem != Problem::kAssociativeRecall) {
    throw std::invalid_argument("spec is not assoc-recall");
  }
  CheckLength(spec, task);
  CheckRepeats(spec, task);
  ExampleBatch out = MakeBatch(spec, task, batch);
  const int items = task.length;
  const int dim = spec.vector_dim;
  const int item_steps = kItemVectors + 1;
  const int query_start = items * item_steps;
  const int response_start = query_start + kItemVectors + 2;
  for (int b = 0; b < batch; ++b) {
    for (int item = 0; item < items; ++item) {
      const int start = item * item_steps;
      out.input(b, start, dim) = 1.0;
      for (int v = 1; v <= kItemVectors; ++v) {
        for (int d = 0; d < dim; ++d) out.input(b, start + v, d) = RandomBit(rng);
      }
    }
    // The query is any item that has a successor.
    const int query =
        static_cast<int>(std::uniform_int_distribution<int>(0, items - 2)(rng));
    out.input(b, query_start, dim + 1) = 1.0;
    out.input(b, query_start + kItemVectors + 1, dim + 1) = 1.0;
    for (int v = 0; v < kItemVectors; ++v) {
      for (int d = 0; d < dim; ++d) {
        out.input(b, query_start + 1 + v, d) = out.input(b, query * item_steps + 1 + v, d);
        out.target(b, response_start + v, d) =
            out.input(b, (query + 1) * item_steps + 1 + v, d);
      }
    }
  }
  return out;
}

ExampleBatch Generate(const TaskId& task, int batch, const ProblemSpec& spec, Rng& rng) {
  switch (spec.problem) {
    case Problem::kCopy:
      return GenerateCopy(task, batch, spec, rng);
    case Problem::kRepeatCopy:
      return GenerateRepeatCopy(task, batch, spec, rng);
    case Problem::kAssociativeRecall:
      return GenerateAssociativeRecall(task, batch, spec, rng);
  }
  throw std::invalid_argument("unknown problem");
}

double BitsError(std::span<const double> outputs, const ExampleBatch& batch) {
  if (outputs.size() != batch.targets.size()) {
    throw StructuralError("bits_error: outputs have " + std::to_string(outputs.size()) +
                          " entries, targets have " +
                          std::to_string(batch.targets.size()));
  }
  long errors = 0;
  const size_t dim = static_cast<size_t>(batch.target_dim);
  for (size_t step = 0; step < batch.loss_mask.size(); ++step) {
    if (!batch.loss_mask[step]) continue;
    for (size_t d = 0; d < dim; ++d) {
      const size_t i = step * dim + d;
      const bool predicted = outputs[i] > 0.5;
      const bool actual = batch.targets[i] > 0.5;
      errors += predicted != actual ? 1 : 0;
    }
  }
  return static_cast<double>(errors) / batch.batch;
}

}  // namespace curriculum
