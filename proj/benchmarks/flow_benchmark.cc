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

#include <vector>

#include "benchmark/benchmark.h"
#include "flowvoc/dsp/mel.h"
#include "flowvoc/flow/config.h"
#include "flowvoc/flow/flow.h"
#include "flowvoc/flow/gradient.h"
#include "flowvoc/flow/model.h"
#include "flowvoc/random.h"

namespace flowvoc::flow {
namespace {

// Args: wn_channels, segment samples. Other settings are the defaults.
struct Setup {
  FlowModel<float> model;
  std::vector<float> x;
  dsp::MelSpectrogram mel;
};

Setup MakeSetup(int channels, int samples) {
  FlowConfig cfg;
  cfg.wn_channels = channels;
  Rng rng(1);
  Setup s{InitFlowModel<float>(cfg, rng), std::vector<float>(samples), {}};
  RandomizeCouplings(s.model, rng, 0.02);
  for (auto& v : s.x) v = static_cast<float>(0.3 * StandardNormal(rng));
  s.mel.n_mels = cfg.n_mel_channels;
  s.mel.n_frames = samples / 256 + 1;
  s.mel.hop_length = 256;
  s.mel.sample_rate = dsp::kCorpusSampleRate;
  s.mel.values.resize(static_cast<size_t>(s.mel.n_mels) * s.mel.n_frames);
  for (auto& v : s.mel.values) v = static_cast<float>(StandardNormal(rng));
  return s;
}

void BM_FlowForward(benchmark::State& state) {
  const Setup s = MakeSetup(state.range(0), state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(FlowForward<float>(s.x, s.mel, s.model));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_FlowForward)
    ->Args({32, 4096})
    ->Args({256, 4096})
    ->Unit(benchmark::kMillisecond);

void BM_FlowInfer(benchmark::State& state) {
  const Setup s = MakeSetup(state.range(0), state.range(1));
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Infer(s.mel, s.model, 0.6, rng,
                                   static_cast<size_t>(state.range(1))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_FlowInfer)
    ->Args({32, 4096})
    ->Args({256, 4096})
    ->Unit(benchmark::kMillisecond);

void BM_LossGradient(benchmark::State& state) {
  Setup s = MakeSetup(state.range(0), state.range(1));
  const Tensor<float> cond =
      UpsampleCondition<float>(s.mel, state.range(1) / 8, 8);
  for (auto _ : state) {
    s.model.ZeroGrad();
    benchmark::DoNotOptimize(
        AccumulateLossGradient<float>(s.model, s.x, cond, 1.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_LossGradient)->Args({32, 4096})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace flowvoc::flow

BENCHMARK_MAIN();
