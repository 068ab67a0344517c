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

#ifndef FLOWVOC_DSP_MEL_IO_H_
#define FLOWVOC_DSP_MEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "flowvoc/dsp/mel.h"

namespace flowvoc::dsp {

// KMEL1 container: 5-byte magic, then n_mels, n_frames, hop_length,
// sample_rate as u32 LE, then row-major f32 LE values.
std::vector<uint8_t> EncodeMel(const MelSpectrogram& mel);
MelSpectrogram DecodeMel(std::span<const uint8_t> bytes);

void WriteMelFile(const MelSpectrogram& mel, const std::filesystem::path& path);
// Errors: kIoFailure, kCorruptFile (bad magic or length).
MelSpectrogram ReadMelFile(const std::filesystem::path& path);

}  // namespace flowvoc::dsp

#endif  // FLOWVOC_DSP_MEL_IO_H_
