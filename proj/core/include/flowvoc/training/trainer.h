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

#ifndef FLOWVOC_TRAINING_TRAINER_H_
#define FLOWVOC_TRAINING_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowvoc/corpus/manifest.h"
#include "flowvoc/dsp/audio.h"
#include "flowvoc/dsp/mel.h"
#include "flowvoc/flow/flow.h"
#include "flowvoc/training/adam.h"
#include "flowvoc/training/checkpoint.h"
#include "flowvoc/training/config.h"

namespace flowvoc::training {

// Stepwise exponential decay: learning_rate * gamma^floor(iteration / interval).
// `iteration` counts completed updates. kConfigInvalid if negative.
double LrAt(int64_t iteration, const TrainConfig& cfg);

struct TrainingExample {
  std::vector<float> segment;
  dsp::MelSpectrogram mel;
};

// Minimizes the mean of the per-example losses. The returned breakdown is
// that mean, component by component. Throws kNonFiniteLoss, leaving
// parameters and the Adam state untouched, if any loss term or gradient is
// not finite. kConfigInvalid for an empty batch or one larger than
// cfg.batch_size.
flow::LossBreakdown TrainingStep(flow::FlowModel<float>& model,
                                 std::span<const TrainingExample> batch,
                                 AdamState& adam, const TrainConfig& cfg,
                                 double lr);

struct IterationMetrics {
  int64_t iteration = 0;  // 1-based
  double lr = 0.0;
  flow::LossBreakdown loss;
  bool accepted = true;
};

// iter<TAB>lr<TAB>z_term<TAB>log_s_term<TAB>log_det_w_term<TAB>total
// Rejected steps report nan for every loss column.
std::string FormatMetricsLine(const IterationMetrics& m);

inline constexpr int kMaxConsecutiveFailures = 5;
inline constexpr char kMetricsFileName[] = "metrics.tsv";

struct TrainOptions {
  std::filesystem::path checkpoint_dir;
  // Continue from this state instead of initializing from the seed.
  std::optional<Checkpoint> resume;
  std::function<void(const IterationMetrics&)> on_iteration;
};

// Fresh starting point: model initialized and epoch-0 order drawn from
// config.train.seed.
Checkpoint InitialCheckpoint(const RunConfig& config, size_t num_clips);

// Epoch loop over `clips` in a seeded shuffled order. Each visit draws one
// random segment of segment_length samples and computes its mel on the fly.
// Writes checkpoint_<iter>.kwg every iters_per_checkpoint iterations and at
// termination, and appends one line per iteration to metrics.tsv (on resume,
// lines past the checkpoint's iteration are dropped first). Stops after
// config.train.epochs epochs or max_iterations iterations. Errors:
// kCorpusEmpty, kVersionMismatch (resume state incompatible), kIoFailure,
// kNonFiniteLoss after kMaxConsecutiveFailures rejected steps in a row.
Checkpoint Train(std::span<const dsp::AudioClip> clips, const RunConfig& config,
                 const TrainOptions& options);

// Decodes the train split. kCorpusEmpty if it has no records.
std::vector<dsp::AudioClip> LoadTrainingClips(const corpus::Manifest& manifest);

}  // namespace flowvoc::training

#endif  // FLOWVOC_TRAINING_TRAINER_H_
