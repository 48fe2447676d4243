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

// Multi-seed aggregation: median learning curves and box statistics of
// generalization errors, written as CSV tables, SVG figures and a manifest.
//
// Quartiles everywhere use linear interpolation between order statistics
// (position p * (n - 1)).

#ifndef CURRICULUM_REPORTING_H_
#define CURRICULUM_REPORTING_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "curriculum/harness.h"

namespace curriculum {

struct CurvePoint {
  long step = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Median over seeds at every validation step. Diverged records are left out
// unless every record diverged. Each record's steps must be a prefix of the
// longest one (runs may stop early); the curve covers the steps present in
// all contributing records. Throws StructuralError for misaligned steps and
// ContractViolation for no records.
std::vector<CurvePoint> MedianCurve(std::span<const RunRecord> records, Setting setting);

// Throws ContractViolation on empty input.
BoxStats ComputeBoxStats(std::span<const double> values);

// Writes, for every problem present in `records`:
//   curves_<problem>_<setting>.csv           step,syllabus,median,q1,q3
//   generalization_<problem>_<test>.csv      syllabus,min,q1,median,q3,max
// one SVG per CSV, and manifest.txt. Returns the written paths. Throws
// std::runtime_error naming the path when the directory is not writable.
std::vector<std::filesystem::path> EmitReport(std::span<const RunRecord> records,
                                              const std::filesystem::path& out_dir);

// Loads every completed run (those with a status file) under `dir`.
std::vector<RunRecord> LoadRunRecords(const std::filesystem::path& dir);

}  // namespace curriculum

#endif  // CURRICULUM_REPORTING_H_
