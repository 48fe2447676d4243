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

#include "curriculum/syllabus.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace curriculum {
namespace {

// Tasks dominated by C on every coordinate, excluding C itself.
std::vector<int> PreviousTasks(const ProblemSpec& spec, const TaskId& current) {
  std::vector<int> previous;
  const int total = NumTasks(spec);
  for (int flat = 1; flat <= total; ++flat) {
    const TaskId task = TaskAt(spec, flat);
    if (task == current) continue;
    if (task.length <= current.length && task.repeats <= current.repeats) {
      previous.push_back(flat);
    }
  }
  return previous;
}

int Doubled(int value, int max) { return std::min(2 * value, max); }

}  // namespace

std::string_view SyllabusName(SyllabusKind kind) {
  switch (kind) {
    case SyllabusKind::kNone:
      return "none";
    case SyllabusKind::kUniform:
      return "uniform";
    case SyllabusKind::kNaive:
      return "naive";
    case SyllabusKind::kLookBack:
      return "look-back";
    case SyllabusKind::kLookBackAndForward:
      return "look-back-forward";
    case SyllabusKind::kPredictionGain:
      return "prediction-gain";
  }
  return "unknown";
}

SyllabusKind ParseSyllabus(std::string_view name) {
  for (SyllabusKind kind :
       {SyllabusKind::kNone, SyllabusKind::kUniform, SyllabusKind::kNaive,
        SyllabusKind::kLookBack, SyllabusKind::kLookBackAndForward,
        SyllabusKind::kPredictionGain}) {
    if (SyllabusName(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown syllabus '" + std::string(name) + "'");
}

bool IsHandCrafted(SyllabusKind kind) {
  return kind == SyllabusKind::kNaive || kind == SyllabusKind::kLookBack ||
         kind == SyllabusKind::kLookBackAndForward;
}

void SyllabusConfig::Validate() const {
  if (!(lookback_frac > 0.0 && lookback_frac < 1.0)) {
    throw std::invalid_argument("lookback_frac must be in (0, 1)");
  }
  if (!(lbf_frac > 0.0 && lbf_frac < 1.0)) {
    throw std::invalid_argument("lbf_frac must be in (0, 1)");
  }
  if (!(bandit_gamma > 0.0 && bandit_gamma <= 1.0)) {
    throw std::invalid_argument("bandit_gamma must be in (0, 1]");
  }
  if (!(bandit_alpha >= 0.0 && bandit_alpha < 1.0)) {
    throw std::invalid_argument("bandit_alpha must be in [0, 1)");
  }
  if (reward_window < 1) throw std::invalid_argument("reward_window must be positive");
  if (!(reward_quantile_low >= 0.0 && reward_quantile_low < reward_quantile_high &&
        reward_quantile_high <= 1.0)) {
    throw std::invalid_argument("reward_quantiles must satisfy 0 <= lo < hi <= 1");
  }
}

SyllabusState InitialState(const SyllabusConfig& config, const ProblemSpec& spec,
                           long total_steps) {
  SyllabusState state;
  state.num_tasks = NumTasks(spec);
  state.current =
      config.kind == SyllabusKind::kNone ? HardestTask(spec) : EasiestTask(spec);
  state.next_dimension = Dimension::kLength;
  if (config.kind == SyllabusKind::kPredictionGain) {
    const double alpha = config.bandit_alpha > 0.0
                             ? config.bandit_alpha
                             : 1.0 / static_cast<double>(std::max(total_steps, 2L));
    state.bandit = BanditState(
        state.num_tasks, config.bandit_gamma, alpha,
        RewardHistory(static_cast<size_t>(config.reward_window), config.reward_quantile_low,
                      config.reward_quantile_high));
  }
  return state;
}

TaskDistribution Distribution(const SyllabusConfig& config, const SyllabusState& state,
                              const ProblemSpec& spec) {
  const int total = state.num_tasks;
  TaskDistribution dist;
  dist.probabilities.assign(total, 0.0);
  auto& p = dist.probabilities;
  const int c = FlatIndex(spec, state.current);
  switch (config.kind) {
    case SyllabusKind::kNone:
      p[total - 1] = 1.0;
      break;
    case SyllabusKind::kUniform:
      std::fill(p.begin(), p.end(), 1.0 / total);
      break;
    case SyllabusKind::kNaive:
      p[c - 1] = 1.0;
      break;
    case SyllabusKind::kLookBack: {
      std::vector<int> previous = PreviousTasks(spec, state.current);
      // Uniform(1, max{1, C-1}) collapses onto the easiest task at C = 1.
      if (previous.empty()) previous.push_back(FlatIndex(spec, EasiestTask(spec)));
      p[c - 1] += 1.0 - config.lookback_frac;
      for (int flat : previous) p[flat - 1] += config.lookback_frac / previous.size();
      break;
    }
    case SyllabusKind::kLookBackAndForward:
      for (double& pi : p) pi = config.lbf_frac / total;
      p[c - 1] += 1.0 - config.lbf_frac;
      break;
    case SyllabusKind::kPredictionGain:
      throw ContractViolation("prediction-gain has no closed-form distribution");
  }
  return dist;
}

TaskDistribution CurrentDistribution(const SyllabusConfig& config,
                                     const SyllabusState& state, const ProblemSpec& spec) {
  if (config.kind == SyllabusKind::kPredictionGain) {
    return {state.bandit.value().Probabilities()};
  }
  return Distribution(config, state, spec);
}

int SampleTask(const TaskDistribution& dist, Rng& rng) {
  const double u = UniformUnit(rng);
  double cumulative = 0.0;
  int last_positive = 0;
  for (int i = 0; i < dist.num_tasks(); ++i) {
    if (dist.probabilities[i] <= 0.0) continue;
    cumulative += dist.probabilities[i];
    last_positive = i + 1;
    if (u < cumulative) return i + 1;
  }
  // Rounding left u above the accumulated mass.
  return last_positive;
}

SyllabusState Progress(const SyllabusState& state, double validation_bits_error,
                       const ProblemSpec& spec) {
  SyllabusState next = state;
  if (!(validation_bits_error <= spec.success_threshold)) return next;

  const bool two_dimensional = spec.problem == Problem::kRepeatCopy;
  const bool length_maxed = next.current.length >= spec.max_length;
  const bool repeats_maxed = !two_dimensional || next.current.repeats >= spec.max_repeats;
  Dimension dim = next.next_dimension;
  if (dim == Dimension::kLength && length_maxed && !repeats_maxed) dim = Dimension::kRepeats;
  if (dim == Dimension::kRepeats && repeats_maxed && !length_maxed) dim = Dimension::kLength;

  if (dim == Dimension::kLength) {
    next.current.length = Doubled(next.current.length, spec.max_length);
  } else {
    next.current.repeats = Doubled(next.current.repeats, spec.max_repeats);
  }
  if (two_dimensional) {
    next.next_dimension =
        dim == Dimension::kLength ? Dimension::kRepeats : Dimension::kLength;
  }
  return next;
}

Syllabus::Syllabus(const SyllabusConfig& config, const ProblemSpec& spec, long total_steps)
    : config_(config), spec_(spec), state_(InitialState(config, spec, total_steps)) {
  config_.Validate();
}

int Syllabus::NextTask(Rng& rng) const {
  if (config_.kind == SyllabusKind::kPredictionGain) return Exp3sSample(*state_.bandit, rng);
  return SampleTask(Distribution(config_, state_, spec_), rng);
}

TaskDistribution Syllabus::distribution() const {
  return CurrentDistribution(config_, state_, spec_);
}

int Syllabus::current_flat() const {
  if (IsHandCrafted(config_.kind)) return FlatIndex(spec_, state_.current);
  // Mode of the distribution; ties resolve to the harder task.
  const TaskDistribution dist = distribution();
  int best = 1;
  for (int flat = 1; flat <= dist.num_tasks(); ++flat) {
    if (dist.at(flat) >= dist.at(best)) best = flat;
  }
  return best;
}

double Syllabus::ObserveTrainingStep(int flat, double loss_before, double loss_after,
                                     int masked_bits) {
  if (config_.kind != SyllabusKind::kPredictionGain) return 0.0;
  BanditState& bandit = *state_.bandit;
  const double reward =
      PredictionGainReward(loss_before, loss_after, masked_bits, bandit, config_.reward_scale);
  Exp3sUpdate(bandit, flat, reward);
  return reward;
}

bool Syllabus::ObserveValidation(double current_task_bits_error) {
  if (!IsHandCrafted(config_.kind)) return false;
  const TaskId before = state_.current;
  state_ = Progress(state_, current_task_bits_error, spec_);
  return !(state_.current == before);
}

}  // namespace curriculum
