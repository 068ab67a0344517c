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
#include "flowvoc/dsp/audio.h"
#include "flowvoc/dsp/mel.h"
#include "flowvoc/dsp/stft.h"
#include "flowvoc/random.h"

namespace flowvoc::dsp {
namespace {

std::vector<float> Noise(size_t n) {
  Rng rng(1);
  std::vector<float> x(n);
  for (auto& v : x) v = static_cast<float>(0.3 * StandardNormal(rng));
  return x;
}

void BM_Stft(benchmark::State& state) {
  const auto x = Noise(static_cast<size_t>(state.range(0)));
  const StftConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(Stft(x, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(16000)->Arg(22050 * 4);

void BM_MelExtractor(benchmark::State& state) {
  const auto x = Noise(static_cast<size_t>(state.range(0)));
  const MelExtractor ex(StftConfig{}, MelConfig{}, kCorpusSampleRate);
  for (auto _ : state) benchmark::DoNotOptimize(ex.Compute(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MelExtractor)->Arg(16000)->Arg(22050 * 4);

void BM_MelFilterbank(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        MelFilterbank(MelConfig{}, StftConfig{}, kCorpusSampleRate));
  }
}
BENCHMARK(BM_MelFilterbank);

}  // namespace
}  // namespace flowvoc::dsp

BENCHMARK_MAIN();
