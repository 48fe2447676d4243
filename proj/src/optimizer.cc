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

#include "curriculum/optimizer.h"

#include <cmath>
#include <stdexcept>

namespace curriculum {

void AdamStep(NetParams& params, const NetParams& grads, AdamState& state) {
  if (params.shape() != grads.shape() || params.shape() != state.m.shape() ||
      params.shape() != state.v.shape()) {
    throw StructuralError("adam: parameter, gradient and moment shapes differ");
  }
  const AdamConfig& cfg = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  auto theta = params.values();
  auto g = grads.values();
  auto m = state.m.values();
  auto v = state.v.values();
  for (size_t i = 0; i < theta.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    theta[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

double GlobalNorm(const NetParams& grads) {
  double sum = 0.0;
  for (double g : grads.values()) sum += g * g;
  return std::sqrt(sum);
}

double ClipGradients(NetParams& grads, double max_norm) {
  if (!(max_norm > 0.0)) throw std::invalid_argument("max_norm must be positive");
  const double norm = GlobalNorm(grads);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& g : grads.values()) g *= scale;
  }
  return norm;
}

}  // namespace curriculum
