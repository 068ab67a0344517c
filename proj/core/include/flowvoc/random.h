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

#ifndef FLOWVOC_RANDOM_H_
#define FLOWVOC_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>

namespace flowvoc {

// All randomness flows through this engine. The std distributions are
// implementation-defined, so the helpers below draw directly from the raw
// 64-bit stream to keep results identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [0, n). n must be > 0.
uint64_t UniformIndex(Rng& rng, uint64_t n);

// Uniform double in [0, 1) with 53 random bits.
double UniformUnit(Rng& rng);

// Standard normal via Box-Muller (one draw per call, no cached spare so the
// engine state alone determines the stream).
double StandardNormal(Rng& rng);

// Fisher-Yates shuffle.
template <typename T>
void Shuffle(std::span<T> values, Rng& rng) {
  for (size_t i = values.size(); i > 1; --i) {
    const size_t j = UniformIndex(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

std::string SerializeRng(const Rng& rng);
Rng DeserializeRng(const std::string& text);

}  // namespace flowvoc

#endif  // FLOWVOC_RANDOM_H_
