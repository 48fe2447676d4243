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

#include "curriculum/bandit.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "curriculum/stats.h"

namespace curriculum {

RewardHistory::RewardHistory(size_t window, double low_quantile, double high_quantile)
    : window_(window), low_quantile_(low_quantile), high_quantile_(high_quantile) {
  if (window == 0) throw std::invalid_argument("reward_window must be positive");
  if (!(low_quantile >= 0.0 && low_quantile < high_quantile && high_quantile <= 1.0)) {
    throw std::invalid_argument("reward_quantiles must satisfy 0 <= lo < hi <= 1");
  }
}

double RewardHistory::low() const {
  if (values_.empty()) return 0.0;
  return Quantile({values_.begin(), values_.end()}, low_quantile_);
}

double RewardHistory::high() const {
  if (values_.empty()) return 0.0;
  return Quantile({values_.begin(), values_.end()}, high_quantile_);
}

void RewardHistory::Record(double raw) {
  values_.push_back(raw);
  while (values_.size() > window_) values_.pop_front();
}

double RewardHistory::ScaleAndRecord(double raw) {
  double scaled = 0.0;
  if (!values_.empty()) {
    std::vector<double> sorted(values_.begin(), values_.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = SortedQuantile(sorted, low_quantile_);
    const double hi = SortedQuantile(sorted, high_quantile_);
    if (hi != lo) scaled = std::clamp(2.0 * (raw - lo) / (hi - lo) - 1.0, -1.0, 1.0);
  }
  Record(raw);
  return scaled;
}

BanditState::BanditState(int arms, double gamma, double alpha, RewardHistory history)
    : log_weights(arms, 0.0), gamma(gamma), alpha(alpha), history(std::move(history)) {
  if (arms < 1) throw std::invalid_argument("bandit needs at least one arm");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("bandit_gamma must be in (0, 1]");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("bandit_alpha must be in [0, 1)");
}

std::vector<double> BanditState::Probabilities() const {
  const double max = *std::max_element(log_weights.begin(), log_weights.end());
  std::vector<double> p(log_weights.size());
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(log_weights[i] - max);
    total += p[i];
  }
  const double floor = gamma / static_cast<double>(p.size());
  for (double& pi : p) pi = (1.0 - gamma) * pi / total + floor;
  return p;
}

int Exp3sSample(const BanditState& bandit, Rng& rng) {
  const std::vector<double> p = bandit.Probabilities();
  const double u = UniformUnit(rng);
  double cumulative = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (u < cumulative) return static_cast<int>(i) + 1;
  }
  return static_cast<int>(p.size());
}

void Exp3sUpdate(BanditState& bandit, int arm, double scaled_reward) {
  const int arms = bandit.arms();
  if (arm < 1 || arm > arms) {
    throw ContractViolation("bandit arm " + std::to_string(arm) + " outside [1, " +
                            std::to_string(arms) + "]");
  }
  if (!(scaled_reward >= -1.0 && scaled_reward <= 1.0)) {
    throw ContractViolation("bandit reward outside [-1, 1]");
  }
  const double p_arm = bandit.Probabilities()[arm - 1];
  bandit.log_weights[arm - 1] += bandit.gamma / arms * (scaled_reward / p_arm);

  // Mixing in weight space, relative to the largest weight so exp() stays
  // finite; the final shift keeps the maximum log-weight at 0.
  std::vector<double>& lw = bandit.log_weights;
  double max = *std::max_element(lw.begin(), lw.end());
  if (bandit.alpha > 0.0) {
    double total = 0.0;
    for (double v : lw) total += std::exp(v - max);
    const double share = bandit.alpha / arms * total;
    for (double& v : lw) v = std::log((1.0 - bandit.alpha) * std::exp(v - max) + share);
    max = *std::max_element(lw.begin(), lw.end());
  }
  for (double& v : lw) v -= max;
}

double PredictionGainReward(double loss_before, double loss_after, int masked_bits,
                            BanditState& bandit, RewardScale scale) {
  if (!std::isfinite(loss_before) || !std::isfinite(loss_after)) {
    throw NumericFault("non-finite loss in prediction gain reward");
  }
  double raw = loss_before - loss_after;
  if (scale == RewardScale::kPerTargetBit) {
    if (masked_bits < 1) throw ContractViolation("per-bit scaling needs masked bits");
    raw /= masked_bits;
  }
  return bandit.history.ScaleAndRecord(raw);
}

}  // namespace curriculum
