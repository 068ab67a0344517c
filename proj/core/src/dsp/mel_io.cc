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

#include "flowvoc/dsp/mel_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "flowvoc/error.h"

namespace flowvoc::dsp {

namespace {

constexpr char kMagic[] = "KMEL1";
constexpr size_t kMagicSize = 5;
constexpr size_t kHeaderSize = kMagicSize + 4 * 4;

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t GetU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<uint8_t> EncodeMel(const MelSpectrogram& mel) {
  std::vector<uint8_t> out(kMagic, kMagic + kMagicSize);
  out.reserve(kHeaderSize + mel.values.size() * 4);
  PutU32(out, static_cast<uint32_t>(mel.n_mels));
  PutU32(out, static_cast<uint32_t>(mel.n_frames));
  PutU32(out, static_cast<uint32_t>(mel.hop_length));
  PutU32(out, static_cast<uint32_t>(mel.sample_rate));
  for (const float v : mel.values) PutU32(out, std::bit_cast<uint32_t>(v));
  return out;
}

MelSpectrogram DecodeMel(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderSize ||
      std::memcmp(bytes.data(), kMagic, kMagicSize) != 0) {
    throw Error(ErrorCode::kCorruptFile, "not a KMEL1 mel feature file");
  }
  const uint8_t* p = bytes.data() + kMagicSize;
  MelSpectrogram mel;
  mel.n_mels = static_cast<int>(GetU32(p));
  mel.n_frames = static_cast<int>(GetU32(p + 4));
  mel.hop_length = static_cast<int>(GetU32(p + 8));
  mel.sample_rate = static_cast<int>(GetU32(p + 12));
  const uint64_t count =
      static_cast<uint64_t>(static_cast<uint32_t>(mel.n_mels)) *
      static_cast<uint32_t>(mel.n_frames);
  if (bytes.size() != kHeaderSize + count * 4) {
    throw Error(ErrorCode::kCorruptFile,
                "mel feature file length does not match its header");
  }
  mel.values.resize(count);
  const uint8_t* data = bytes.data() + kHeaderSize;
  for (uint64_t i = 0; i < count; ++i) {
    mel.values[i] = std::bit_cast<float>(GetU32(data + 4 * i));
  }
  return mel;
}

void WriteMelFile(const MelSpectrogram& mel,
                  const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = EncodeMel(mel);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

MelSpectrogram ReadMelFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return DecodeMel(bytes);
}

}  // namespace flowvoc::dsp
