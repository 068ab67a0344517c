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

#ifndef FLOWVOC_DSP_AUDIO_H_
#define FLOWVOC_DSP_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "flowvoc/random.h"

namespace flowvoc::dsp {

inline constexpr int kCorpusSampleRate = 22050;

// Mono waveform with samples normalized to [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kCorpusSampleRate;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Header-level description of a WAV file.
struct WavInfo {
  int channels = 0;
  int bits_per_sample = 0;
  int format_tag = 0;
  int sample_rate = 0;
  uint64_t num_frames = 0;

  double DurationSeconds() const {
    return sample_rate > 0 ? static_cast<double>(num_frames) / sample_rate
                           : 0.0;
  }
};

// Reads only the RIFF header and chunk table; sample data is not touched.
// Throws kNotWav on bad magic, kIoFailure if the file cannot be opened.
WavInfo ProbeWav(const std::filesystem::path& path);

// Decodes 16-bit PCM mono. Samples are divided by 32768.
// Errors: kNotWav, kUnsupportedFormat (not 16-bit PCM mono), kEmptyAudio,
// kIoFailure.
AudioClip LoadWav(const std::filesystem::path& path);

// Writes 16-bit PCM mono, clamping to [-1, 1 - 2^-15] before quantizing.
// Errors: kEmptyAudio, kIoFailure.
void SaveWav(const AudioClip& clip, const std::filesystem::path& path);

// Serializes a clip to in-memory WAV bytes (same encoding as SaveWav).
std::vector<uint8_t> EncodeWav(const AudioClip& clip);

// Throws kUnsupportedFormat unless the clip is at the corpus rate.
void RequireCorpusRate(const AudioClip& clip);

// A uniformly random contiguous window of `segment_length` samples, or the
// clip zero-padded at the end when it is shorter.
AudioClip SampleSegment(const AudioClip& clip, size_t segment_length,
                        Rng& rng);

}  // namespace flowvoc::dsp

#endif  // FLOWVOC_DSP_AUDIO_H_
