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

#include "flowvoc/random.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "flowvoc/error.h"

namespace flowvoc {

uint64_t UniformIndex(Rng& rng, uint64_t n) {
  // Reject the lowest 2^64 mod n values so every residue is equally likely.
  const uint64_t threshold = (0 - n) % n;
  uint64_t draw = rng();
  while (draw < threshold) draw = rng();
  return draw % n;
}

double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double StandardNormal(Rng& rng) {
  double u1 = UniformUnit(rng);
  while (u1 <= 0.0) u1 = UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::string SerializeRng(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

Rng DeserializeRng(const std::string& text) {
  std::istringstream in(text);
  Rng rng;
  in >> rng;
  if (in.fail()) {
    throw Error(ErrorCode::kCorruptFile, "unreadable random engine state");
  }
  return rng;
}

}  // namespace flowvoc
