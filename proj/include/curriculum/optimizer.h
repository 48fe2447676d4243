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

#ifndef CURRICULUM_OPTIMIZER_H_
#define CURRICULUM_OPTIMIZER_H_

#include <cstdint>

#include "curriculum/lstm.h"

namespace curriculum {

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct AdamState {
  AdamState() = default;
  AdamState(const LstmShape& shape, const AdamConfig& config)
      : config(config), m(shape), v(shape) {}

  AdamConfig config;
  NetParams m;
  NetParams v;
  int64_t step = 0;

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

// One bias-corrected Adam update of `params` in place.
void AdamStep(NetParams& params, const NetParams& grads, AdamState& state);

double GlobalNorm(const NetParams& grads);

// Rescales `grads` so the global L2 norm is at most max_norm. Returns the
// norm before clipping.
double ClipGradients(NetParams& grads, double max_norm);

}  // namespace curriculum

#endif  // CURRICULUM_OPTIMIZER_H_
