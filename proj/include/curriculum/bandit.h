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

// Exp3.S adversarial bandit over the flat task grid, plus the adaptive
// rescaling that turns raw Prediction Gain rewards into [-1, 1].
//
// Selection:  p_i = (1 - gamma) * w_i / sum(w) + gamma / T
// Update:     log w_arm += (gamma / T) * r / p_arm
//             w_i <- (1 - alpha) * w_i + (alpha / T) * sum_j w_j

#ifndef CURRICULUM_BANDIT_H_
#define CURRICULUM_BANDIT_H_

#include <cstddef>
#include <deque>
#include <vector>

#include "curriculum/common.h"

namespace curriculum {

// Bounded FIFO of raw rewards and the quantile map derived from it.
class RewardHistory {
 public:
  RewardHistory() = default;
  RewardHistory(size_t window, double low_quantile, double high_quantile);

  // Maps `raw` through the quantiles of the rewards seen so far:
  //   clamp(2 * (raw - q_lo) / (q_hi - q_lo) - 1, -1, 1),
  // or 0 when q_hi == q_lo (including an empty history), then records raw.
  double ScaleAndRecord(double raw);

  // Quantile markers of the current history; both 0 when empty.
  double low() const;
  double high() const;

  size_t size() const { return values_.size(); }
  size_t window() const { return window_; }
  void Record(double raw);

 private:
  size_t window_ = 10000;
  double low_quantile_ = 0.2;
  double high_quantile_ = 0.8;
  std::deque<double> values_;
};

struct BanditState {
  BanditState() = default;
  BanditState(int arms, double gamma, double alpha, RewardHistory history = {});

  std::vector<double> log_weights;
  double gamma = 0.3;
  double alpha = 0.0;
  RewardHistory history;

  int arms() const { return static_cast<int>(log_weights.size()); }
  std::vector<double> Probabilities() const;
};

// Draws an arm in 1..T.
int Exp3sSample(const BanditState& bandit, Rng& rng);

// Applies one Exp3.S update for `arm` (1-based). Throws ContractViolation for
// a reward outside [-1, 1] or an invalid arm.
void Exp3sUpdate(BanditState& bandit, int arm, double scaled_reward);

enum class RewardScale { kNone, kPerTargetBit };

// Prediction Gain: the loss decrease on one batch across one training step,
// optionally divided by the batch's masked target bits per sequence, scaled
// through the bandit's reward history. Throws NumericFault on a non-finite
// loss.
double PredictionGainReward(double loss_before, double loss_after, int masked_bits,
                            BanditState& bandit, RewardScale scale);

}  // namespace curriculum

#endif  // CURRICULUM_BANDIT_H_
