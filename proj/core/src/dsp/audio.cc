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

#include "flowvoc/dsp/audio.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "flowvoc/error.h"

namespace flowvoc::dsp {

namespace {

constexpr int kPcmFormatTag = 1;

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

struct ParsedHeader {
  WavInfo info;
  uint64_t data_offset = 0;
  uint64_t data_bytes = 0;
  int block_align = 0;
};

// Walks the chunk list; leaves the stream positioned arbitrarily.
ParsedHeader ParseHeader(std::ifstream& in, const std::filesystem::path& path) {
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<uint64_t>(in.tellg());
  in.seekg(0);

  std::array<uint8_t, 12> riff{};
  if (!in.read(reinterpret_cast<char*>(riff.data()), riff.size()) ||
      std::memcmp(riff.data(), "RIFF", 4) != 0 ||
      std::memcmp(riff.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kNotWav, path.string() + ": missing RIFF/WAVE magic");
  }

  ParsedHeader header;
  bool have_fmt = false;
  bool have_data = false;
  uint64_t pos = 12;
  while (pos + 8 <= file_size && !have_data) {
    std::array<uint8_t, 8> chunk{};
    in.seekg(static_cast<std::streamoff>(pos));
    if (!in.read(reinterpret_cast<char*>(chunk.data()), chunk.size())) break;
    const uint32_t size = ReadU32(chunk.data() + 4);
    const uint64_t body = pos + 8;
    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      if (size < 16) {
        throw Error(ErrorCode::kNotWav, path.string() + ": short fmt chunk");
      }
      std::array<uint8_t, 16> fmt{};
      if (!in.read(reinterpret_cast<char*>(fmt.data()), fmt.size())) {
        throw Error(ErrorCode::kNotWav, path.string() + ": truncated fmt chunk");
      }
      header.info.format_tag = ReadU16(fmt.data());
      header.info.channels = ReadU16(fmt.data() + 2);
      header.info.sample_rate = static_cast<int>(ReadU32(fmt.data() + 4));
      header.block_align = ReadU16(fmt.data() + 12);
      header.info.bits_per_sample = ReadU16(fmt.data() + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk.data(), "data", 4) == 0) {
      header.data_offset = body;
      header.data_bytes = std::min<uint64_t>(size, file_size - body);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || !have_data) {
    throw Error(ErrorCode::kNotWav,
                path.string() + ": missing fmt or data chunk");
  }
  if (header.block_align > 0) {
    header.info.num_frames = header.data_bytes / header.block_align;
  }
  return header;
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

WavInfo ProbeWav(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ParseHeader(in, path).info;
}

AudioClip LoadWav(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  const ParsedHeader header = ParseHeader(in, path);
  const WavInfo& info = header.info;
  if (info.format_tag != kPcmFormatTag || info.bits_per_sample != 16 ||
      info.channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": expected 16-bit PCM mono, got format " +
                    std::to_string(info.format_tag) + ", " +
                    std::to_string(info.bits_per_sample) + " bits, " +
                    std::to_string(info.channels) + " channel(s)");
  }
  const uint64_t n = header.data_bytes / 2;
  if (n == 0) {
    throw Error(ErrorCode::kEmptyAudio, path.string() + ": no samples");
  }
  std::vector<uint8_t> raw(n * 2);
  in.clear();
  in.seekg(static_cast<std::streamoff>(header.data_offset));
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size()))) {
    throw Error(ErrorCode::kIoFailure, path.string() + ": short read");
  }
  AudioClip clip;
  clip.sample_rate = info.sample_rate;
  clip.samples.resize(n);
  for (uint64_t i = 0; i < n; ++i) {
    const auto v = static_cast<int16_t>(ReadU16(raw.data() + 2 * i));
    clip.samples[i] = static_cast<float>(v) / 32768.0f;
  }
  return clip;
}

std::vector<uint8_t> EncodeWav(const AudioClip& clip) {
  if (clip.samples.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "refusing to encode an empty clip");
  }
  const auto data_bytes = static_cast<uint32_t>(clip.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  const auto tag = [&](const char* s) { out.insert(out.end(), s, s + 4); };
  tag("RIFF");
  PutU32(out, 36 + data_bytes);
  tag("WAVE");
  tag("fmt ");
  PutU32(out, 16);
  PutU16(out, kPcmFormatTag);
  PutU16(out, 1);
  PutU32(out, static_cast<uint32_t>(clip.sample_rate));
  PutU32(out, static_cast<uint32_t>(clip.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  tag("data");
  PutU32(out, data_bytes);
  for (const float s : clip.samples) {
    const double clamped = std::clamp(static_cast<double>(s), -1.0,
                                      1.0 - 1.0 / 32768.0);
    const auto q = static_cast<int16_t>(std::lround(clamped * 32768.0));
    PutU16(out, static_cast<uint16_t>(q));
  }
  return out;
}

void SaveWav(const AudioClip& clip, const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = EncodeWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.write(reinterpret_cast<const char*>(bytes.data()),
                 static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

void RequireCorpusRate(const AudioClip& clip) {
  if (clip.sample_rate != kCorpusSampleRate) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "sample rate " + std::to_string(clip.sample_rate) +
                    " Hz; only " + std::to_string(kCorpusSampleRate) +
                    " Hz is accepted (no resampling)");
  }
}

AudioClip SampleSegment(const AudioClip& clip, size_t segment_length,
                        Rng& rng) {
  if (segment_length == 0) {
    throw Error(ErrorCode::kConfigInvalid, "segment length must be positive");
  }
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  const size_t n = clip.samples.size();
  if (n >= segment_length) {
    const size_t start = UniformIndex(rng, n - segment_length + 1);
    out.samples.assign(clip.samples.begin() + static_cast<ptrdiff_t>(start),
                       clip.samples.begin() +
                           static_cast<ptrdiff_t>(start + segment_length));
  } else {
    out.samples = clip.samples;
    out.samples.resize(segment_length, 0.0f);
  }
  return out;
}

}  // namespace flowvoc::dsp
