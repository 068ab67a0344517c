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

#include "flowvoc/dsp/mel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "flowvoc/error.h"

namespace flowvoc::dsp {

void MelConfig::Validate(int sample_rate) const {
  if (n_mels <= 0) {
    throw Error(ErrorCode::kConfigInvalid, "n_mels must be positive");
  }
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
    throw Error(ErrorCode::kConfigInvalid,
                "need 0 <= fmin < fmax <= sample_rate / 2");
  }
  if (!(compression_floor > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid,
                "compression_floor must be positive");
  }
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

Filterbank MelFilterbank(const MelConfig& cfg, const StftConfig& stft_cfg,
                         int sample_rate) {
  stft_cfg.Validate();
  cfg.Validate(sample_rate);
  Filterbank fb;
  fb.n_mels = cfg.n_mels;
  fb.num_bins = stft_cfg.num_bins();
  fb.weights.assign(static_cast<size_t>(fb.n_mels) * fb.num_bins, 0.0);

  const double mel_lo = HzToMel(cfg.fmin);
  const double mel_hi = HzToMel(cfg.fmax);
  std::vector<double> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (cfg.n_mels + 1));
  }
  const double bin_hz =
      static_cast<double>(sample_rate) / stft_cfg.filter_length;
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double lo = edges[m];
    const double center = edges[m + 1];
    const double hi = edges[m + 2];
    bool any_positive = false;
    for (int k = 0; k < fb.num_bins; ++k) {
      const double f = k * bin_hz;
      const double rising = (f - lo) / (center - lo);
      const double falling = (hi - f) / (hi - center);
      const double w = std::max(0.0, std::min(rising, falling));
      fb.weights[static_cast<size_t>(m) * fb.num_bins + k] = w;
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) {
      throw Error(ErrorCode::kConfigInvalid,
                  "mel band " + std::to_string(m) +
                      " covers no FFT bin; reduce n_mels or raise "
                      "filter_length");
    }
  }
  return fb;
}

MelExtractor::MelExtractor(const StftConfig& stft_cfg, const MelConfig& mel_cfg,
                           int sample_rate)
    : stft_cfg_(stft_cfg),
      mel_cfg_(mel_cfg),
      sample_rate_(sample_rate),
      filterbank_(MelFilterbank(mel_cfg, stft_cfg, sample_rate)) {}

MelSpectrogram MelExtractor::Compute(std::span<const float> samples) const {
  const ComplexMatrix spec = Stft(samples, stft_cfg_);
  MelSpectrogram mel;
  mel.n_mels = mel_cfg_.n_mels;
  mel.n_frames = spec.cols;
  mel.hop_length = stft_cfg_.hop_length;
  mel.sample_rate = sample_rate_;
  mel.values.resize(static_cast<size_t>(mel.n_mels) * mel.n_frames);

  std::vector<double> magnitude(spec.rows);
  for (int t = 0; t < spec.cols; ++t) {
    for (int k = 0; k < spec.rows; ++k) magnitude[k] = std::abs(spec.at(k, t));
    for (int m = 0; m < mel.n_mels; ++m) {
      const double* row =
          filterbank_.weights.data() + static_cast<size_t>(m) * spec.rows;
      double energy = 0.0;
      for (int k = 0; k < spec.rows; ++k) energy += row[k] * magnitude[k];
      mel.at(m, t) = static_cast<float>(
          std::log(std::max(mel_cfg_.compression_floor, energy)));
    }
  }
  return mel;
}

MelSpectrogram ComputeMelSpectrogram(std::span<const float> samples,
                                     int sample_rate,
                                     const StftConfig& stft_cfg,
                                     const MelConfig& mel_cfg) {
  return MelExtractor(stft_cfg, mel_cfg, sample_rate).Compute(samples);
}

}  // namespace flowvoc::dsp
