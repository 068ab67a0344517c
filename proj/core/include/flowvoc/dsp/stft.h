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

#ifndef FLOWVOC_DSP_STFT_H_
#define FLOWVOC_DSP_STFT_H_

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "flowvoc/dsp/audio.h"

namespace flowvoc::dsp {

enum class WindowType { kHann };

std::string_view WindowName(WindowType window);
WindowType ParseWindow(std::string_view name);

struct StftConfig {
  int filter_length = 1024;
  int hop_length = 256;
  int win_length = 1024;
  WindowType window = WindowType::kHann;

  // Throws kConfigInvalid. filter_length must also be even so that centered
  // framing yields floor(N / hop) + 1 frames.
  void Validate() const;

  int num_bins() const { return filter_length / 2 + 1; }
  int NumFrames(size_t num_samples) const {
    return static_cast<int>(num_samples / static_cast<size_t>(hop_length)) + 1;
  }
};

// Row-major bins x frames.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& at(int r, int c) {
    return data[static_cast<size_t>(r) * cols + c];
  }
  const std::complex<double>& at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }
};

// Periodic window of win_length, zero-padded symmetrically to filter_length.
std::vector<double> AnalysisWindow(const StftConfig& cfg);

// In-place forward DFT. Radix-2 when the size is a power of two, direct
// summation otherwise.
void ForwardDft(std::span<std::complex<double>> values);

// Centered STFT: the signal is reflect-padded by filter_length / 2 on both
// sides, frame t starts at padded index t * hop_length.
ComplexMatrix Stft(std::span<const float> samples, const StftConfig& cfg);
inline ComplexMatrix Stft(const AudioClip& clip, const StftConfig& cfg) {
  return Stft(clip.samples, cfg);
}

// Maps a padded-signal index back into [0, n) by mirror reflection without
// repeating the edge sample.
size_t ReflectIndex(long long index, size_t n);

}  // namespace flowvoc::dsp

#endif  // FLOWVOC_DSP_STFT_H_
