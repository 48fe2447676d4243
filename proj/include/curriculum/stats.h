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

#ifndef CURRICULUM_STATS_H_
#define CURRICULUM_STATS_H_

#include <span>
#include <vector>

namespace curriculum {

// Quantile of sorted data by linear interpolation between order statistics
// at position p * (n - 1) (the "type 7" convention). Throws
// ContractViolation on empty input or p outside [0, 1].
double SortedQuantile(std::span<const double> sorted, double p);

// Middle order statistic, or the mean of the two middle ones for an even
// count.
double SortedMedian(std::span<const double> sorted);

// Same as SortedQuantile, for unsorted data.
double Quantile(std::vector<double> values, double p);

}  // namespace curriculum

#endif  // CURRICULUM_STATS_H_
