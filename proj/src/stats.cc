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

#include "curriculum/stats.h"

#include <algorithm>
#include <cmath>

#include "curriculum/common.h"

namespace curriculum {

double SortedQuantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ContractViolation("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw ContractViolation("quantile level outside [0, 1]");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double SortedMedian(std::span<const double> sorted) {
  if (sorted.empty()) throw ContractViolation("median of empty data");
  const size_t n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double Quantile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  return SortedQuantile(values, p);
}

}  // namespace curriculum
