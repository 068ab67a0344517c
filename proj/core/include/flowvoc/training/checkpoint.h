// Copyright 2026 The Flowvoc Authors
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

#ifndef FLOWVOC_TRAINING_CHECKPOINT_H_
#define FLOWVOC_TRAINING_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "flowvoc/flow/model.h"
#include "flowvoc/training/adam.h"
#include "flowvoc/training/config.h"

namespace flowvoc::training {

inline constexpr int kCheckpointFormatVersion = 1;

// Position of a run inside its epoch loop.
struct TrainingState {
  int64_t iteration = 0;   // completed iterations
  int64_t epoch = 0;       // completed epochs
  int64_t cursor = 0;      // next index into `order`
  std::vector<uint32_t> order;
  std::string rng;         // SerializeRng output
  int consecutive_failures = 0;

  friend bool operator==(const TrainingState&, const TrainingState&) = default;
};

struct Checkpoint {
  RunConfig config;
  flow::FlowModel<float> model;
  AdamState adam;
  TrainingState state;
};

// Layout:
//   "KWGLOW1" | u32 LE header length | header text map |
//   parameter blobs | Adam m blobs | Adam v blobs
// Blobs are raw little-endian IEEE-754 binary32 in header order.
std::vector<uint8_t> EncodeCheckpoint(const Checkpoint& ck);

// kCorruptFile on bad magic, truncation, trailing bytes or a header that
// does not parse; kVersionMismatch when the format version is unknown or
// the stored names/shapes disagree with the stored configuration.
Checkpoint DecodeCheckpoint(const std::vector<uint8_t>& bytes);

// Writes to a temporary sibling and renames it into place.
void SaveCheckpoint(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// kVersionMismatch unless the checkpoint's flow topology equals `expected`.
void RequireCompatible(const Checkpoint& ck, const flow::FlowConfig& expected);

std::string CheckpointFileName(int64_t iteration);

// Writes `bytes` to a temporary sibling of `path`, flushes it and renames it
// into place. kIoFailure on error.
void WriteFileAtomically(const std::filesystem::path& path,
                         const std::vector<uint8_t>& bytes);

}  // namespace flowvoc::training

#endif  // FLOWVOC_TRAINING_CHECKPOINT_H_
