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

#ifndef FLOWVOC_DSP_MEL_H_
#define FLOWVOC_DSP_MEL_H_

#include <span>
#include <vector>

#include "flowvoc/dsp/audio.h"
#include "flowvoc/dsp/stft.h"

namespace flowvoc::dsp {

// Log-mel front end conventions: natural log, floor applied to
// filterbank-weighted *magnitude* (not power) spectra, mel scale
// 2595 * log10(1 + f / 700), triangular filters with unit peak.
struct MelConfig {
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double compression_floor = 1e-5;

  void Validate(int sample_rate) const;
};

double HzToMel(double hz);
double MelToHz(double mel);

// Row-major n_mels x num_bins weights.
struct Filterbank {
  int n_mels = 0;
  int num_bins = 0;
  std::vector<double> weights;

  double at(int m, int k) const {
    return weights[static_cast<size_t>(m) * num_bins + k];
  }
};

Filterbank MelFilterbank(const MelConfig& cfg, const StftConfig& stft_cfg,
                         int sample_rate);

// n_mels x n_frames, row-major.
struct MelSpectrogram {
  int n_mels = 0;
  int n_frames = 0;
  int hop_length = 0;
  int sample_rate = 0;
  std::vector<float> values;

  float at(int m, int t) const {
    return values[static_cast<size_t>(m) * n_frames + t];
  }
  float& at(int m, int t) {
    return values[static_cast<size_t>(m) * n_frames + t];
  }
};

// values = ln(max(floor, filterbank * |stft|)).
MelSpectrogram ComputeMelSpectrogram(std::span<const float> samples,
                                     int sample_rate,
                                     const StftConfig& stft_cfg,
                                     const MelConfig& mel_cfg);
inline MelSpectrogram ComputeMelSpectrogram(const AudioClip& clip,
                                            const StftConfig& stft_cfg,
                                            const MelConfig& mel_cfg) {
  return ComputeMelSpectrogram(clip.samples, clip.sample_rate, stft_cfg,
                               mel_cfg);
}

// Precomputed window + filterbank for repeated extraction with one config.
class MelExtractor {
 public:
  MelExtractor(const StftConfig& stft_cfg, const MelConfig& mel_cfg,
               int sample_rate);

  MelSpectrogram Compute(std::span<const float> samples) const;

  const StftConfig& stft_config() const { return stft_cfg_; }
  const MelConfig& mel_config() const { return mel_cfg_; }
  int sample_rate() const { return sample_rate_; }

 private:
  StftConfig stft_cfg_;
  MelConfig mel_cfg_;
  int sample_rate_;
  Filterbank filterbank_;
};

}  // namespace flowvoc::dsp

#endif  // FLOWVOC_DSP_MEL_H_
