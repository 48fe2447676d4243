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

// Binary checkpoint container. Layout (all integers little-endian):
//
//   magic "CLCKPT01" | u32 byte-order marker 0x01020304 | u64 config hash |
//   i64 step | i64 adam step | u32 input_dim, hidden, layers, output_dim |
//   u32 array count |
//   per array: u32 name length, name bytes, u32 rank, u64 dims[rank],
//              f64 values (host byte order, flagged by the marker)
//
// Arrays are the NetParams blocks ("W0", "U0", "b0", ..., "V", "c") followed
// by the Adam moments prefixed "m/" and "v/", then a 4-element "adam" array
// holding lr, beta1, beta2, epsilon.

#ifndef CURRICULUM_CHECKPOINT_H_
#define CURRICULUM_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>

#include "curriculum/lstm.h"
#include "curriculum/optimizer.h"

namespace curriculum {

struct Checkpoint {
  uint64_t config_hash = 0;
  int64_t step = 0;
  NetParams params;
  AdamState adam;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// Throws std::runtime_error if the file cannot be written.
void SaveCheckpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

// Throws std::runtime_error on I/O failure and StructuralError on a malformed
// or foreign-endian file.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace curriculum

#endif  // CURRICULUM_CHECKPOINT_H_
