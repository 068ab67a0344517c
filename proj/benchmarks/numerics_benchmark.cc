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
#include "flowvoc/numerics/ops.h"
#include "flowvoc/numerics/tensor.h"
#include "flowvoc/random.h"

namespace flowvoc::numerics {
namespace {

Tensor<float> Random(std::vector<size_t> shape, Rng& rng) {
  Tensor<float> t(std::move(shape));
  for (auto& v : t.values()) v = static_cast<float>(0.1 * StandardNormal(rng));
  return t;
}

// Args: channels, frames. Shapes of the default coupling network's dilated
// layer: channels -> 2 * channels, kernel 3.
void BM_DilatedConv1dForward(benchmark::State& state) {
  const size_t c = state.range(0), t = state.range(1);
  Rng rng(1);
  const auto x = Random({c, t}, rng);
  const auto w = Random({2 * c, c, 3}, rng);
  const auto b = Random({2 * c}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(DilatedConv1dForward(x, w, b, 4));
  state.SetItemsProcessed(state.iterations() * 2 * c * c * 3 * t);
}
BENCHMARK(BM_DilatedConv1dForward)->Args({32, 2000})->Args({256, 2000});

void BM_DilatedConv1dBackward(benchmark::State& state) {
  const size_t c = state.range(0), t = state.range(1);
  Rng rng(2);
  const auto x = Random({c, t}, rng);
  const auto w = Random({2 * c, c, 3}, rng);
  const auto g = Random({2 * c, t}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(DilatedConv1dBackward(g, x, w, 4));
  state.SetItemsProcessed(state.iterations() * 2 * c * c * 3 * t);
}
BENCHMARK(BM_DilatedConv1dBackward)->Args({32, 2000})->Args({256, 2000});

void BM_PointwiseConvForward(benchmark::State& state) {
  const size_t c = state.range(0), t = state.range(1);
  Rng rng(3);
  const auto x = Random({c, t}, rng);
  const auto w = Random({2 * c, c}, rng);
  const auto b = Random({2 * c}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(PointwiseConvForward(x, w, b));
  state.SetItemsProcessed(state.iterations() * 2 * c * c * t);
}
BENCHMARK(BM_PointwiseConvForward)->Args({32, 2000})->Args({256, 2000});

}  // namespace
}  // namespace flowvoc::numerics

BENCHMARK_MAIN();
