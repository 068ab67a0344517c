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

#include <complex>
#include <vector>

#include "flowvoc/dsp/mel.h"
#include "flowvoc/dsp/stft.h"
#include "flowvoc/flow/flow.h"
#include "flowvoc/training/trainer.h"
#include "gtest/gtest.h"
#include "support/test_util.h"

namespace flowvoc {
namespace {

using testing::TempDir;

// Bin with the most energy summed over all STFT frames.
int DominantBin(const std::vector<float>& x, const dsp::StftConfig& cfg) {
  const auto m = dsp::Stft(x, cfg);
  int best = 0;
  double best_energy = -1.0;
  for (int k = 0; k < m.rows; ++k) {
    double energy = 0.0;
    for (int t = 0; t < m.cols; ++t) energy += std::norm(m.at(k, t));
    if (energy > best_energy) {
      best_energy = energy;
      best = k;
    }
  }
  return best;
}

// A small model trained on one pure tone must synthesize audio whose
// dominant bin, on the front end's own STFT grid, is the tone's bin.
TEST(ToneTest, TrainedModelReproducesTonePeak) {
  training::RunConfig cfg = testing::TinyRunConfig();
  cfg.flow.n_flows = 8;
  cfg.flow.wn_layers = 4;
  cfg.flow.wn_channels = 32;
  cfg.train.batch_size = 4;
  cfg.train.learning_rate = 1e-3;
  cfg.train.max_iterations = 3000;
  cfg.train.iters_per_checkpoint = 3000;
  cfg.Validate();

  const int tone_bin = 5;
  const double hz = tone_bin * static_cast<double>(dsp::kCorpusSampleRate) /
                    cfg.stft.filter_length;
  std::vector<dsp::AudioClip> clips;
  for (int i = 0; i < 16; ++i) clips.push_back(testing::Sine(hz, 4096, 0.3 + 0.02 * i));
  TempDir dir;
  const training::Checkpoint ck = training::Train(clips, cfg, {dir.path(), {}, {}});

  const auto reference = testing::Sine(hz, 2048, 0.4);
  ASSERT_EQ(DominantBin(reference.samples, cfg.stft), tone_bin);
  const dsp::MelExtractor extractor(cfg.stft, cfg.mel, dsp::kCorpusSampleRate);
  const auto mel = extractor.Compute(reference.samples);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const auto out = flow::Infer(mel, ck.model, 0.6, rng, reference.samples.size());
    EXPECT_EQ(DominantBin(out.samples, cfg.stft), tone_bin) << "seed " << seed;
  }
}

}  // namespace
}  // namespace flowvoc
