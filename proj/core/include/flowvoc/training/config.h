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

#ifndef FLOWVOC_TRAINING_CONFIG_H_
#define FLOWVOC_TRAINING_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "flowvoc/dsp/mel.h"
#include "flowvoc/dsp/stft.h"
#include "flowvoc/flow/config.h"
#include "flowvoc/text_map.h"

namespace flowvoc::training {

// Optimizer and schedule. The decay rate and interval are not part of the
// reference hyperparameters; 0.999 every 1000 iterations is this project's
// default.
struct TrainConfig {
  int batch_size = 22;
  double learning_rate = 1e-4;
  double lr_decay_gamma = 0.999;
  int64_t lr_decay_interval = 1000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  int64_t epochs = 100000;
  double sigma = 1.0;
  int64_t iters_per_checkpoint = 2000;
  uint64_t seed = 1234;
  int segment_length = 16000;
  // Stop after this many iterations in total; 0 means run all epochs.
  int64_t max_iterations = 0;

  void Validate() const;

  void WriteTo(TextMap& map, std::string_view prefix = "train.") const;
  void ApplyOverrides(const TextMap& map, std::string_view prefix = "train.");

  // Fingerprint of everything except max_iterations, so a run can be
  // resumed with a different stopping point.
  uint64_t Hash() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Everything a run needs: model topology, feature front end, optimizer.
struct RunConfig {
  flow::FlowConfig flow;
  dsp::StftConfig stft;
  dsp::MelConfig mel;
  TrainConfig train;

  void Validate() const;

  TextMap ToTextMap() const;
  // Starts from defaults and applies every key in the map. Keys outside the
  // flow./stft./mel./train. namespaces are rejected with kConfigInvalid.
  static RunConfig FromTextMap(const TextMap& map);
  static RunConfig FromFile(const std::filesystem::path& path);
};

void WriteFeatureConfig(const dsp::StftConfig& stft, const dsp::MelConfig& mel,
                        TextMap& map);
void ApplyFeatureOverrides(const TextMap& map, dsp::StftConfig& stft,
                           dsp::MelConfig& mel);

}  // namespace flowvoc::training

#endif  // FLOWVOC_TRAINING_CONFIG_H_
