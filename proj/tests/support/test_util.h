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

#ifndef FLOWVOC_TESTS_SUPPORT_TEST_UTIL_H_
#define FLOWVOC_TESTS_SUPPORT_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "flowvoc/dsp/audio.h"
#include "flowvoc/evaluation/ratings.h"
#include "flowvoc/flow/config.h"
#include "flowvoc/training/config.h"

namespace flowvoc::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
      path_ = base / ("flowvoc_test_" + std::to_string(rd()) +
                      std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline dsp::AudioClip Sine(double hz, size_t n, double amplitude = 0.5,
                           int sample_rate = dsp::kCorpusSampleRate) {
  dsp::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    clip.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * std::numbers::pi * hz * i / sample_rate));
  }
  return clip;
}

inline dsp::AudioClip Noise(size_t n, double amplitude, uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  dsp::AudioClip clip;
  clip.samples.resize(n);
  for (auto& s : clip.samples) s = static_cast<float>(u(gen));
  return clip;
}

// Small topology that keeps every structural feature (early emission,
// multiple WN layers, an odd live channel count after emission).
inline flow::FlowConfig TinyFlowConfig() {
  flow::FlowConfig cfg;
  cfg.n_mel_channels = 8;
  cfg.n_flows = 4;
  cfg.group_size = 8;
  cfg.early_every = 2;
  cfg.early_size = 1;
  cfg.wn_layers = 2;
  cfg.wn_channels = 8;
  cfg.wn_kernel = 3;
  return cfg;
}

// Tiny model with a matching small front end: 8 mel bands, 64-point STFT
// with hop 16, 512-sample segments and batches of 4. Optimizer settings are
// the library defaults.
inline training::RunConfig TinyRunConfig() {
  training::RunConfig cfg;
  cfg.flow = TinyFlowConfig();
  cfg.stft.filter_length = 64;
  cfg.stft.hop_length = 16;
  cfg.stft.win_length = 64;
  cfg.mel.n_mels = 8;
  cfg.train.batch_size = 4;
  cfg.train.segment_length = 512;
  return cfg;
}

// Alternating sines (110 Hz steps) and uniform noise, 2048 samples each.
inline std::vector<dsp::AudioClip> SyntheticClips(int count) {
  std::vector<dsp::AudioClip> clips;
  for (int i = 0; i < count; ++i) {
    clips.push_back(i % 2 == 0 ? Sine(220.0 + 110.0 * i, 2048, 0.5)
                               : Noise(2048, 0.3, static_cast<uint64_t>(i)));
  }
  return clips;
}

// Train-split category sizes of the Sabat corpus.
inline const std::vector<std::pair<std::string, int>>& TrainCategoryCounts() {
  static const std::vector<std::pair<std::string, int>> counts = {
      {"linguistics", 1760},
      {"questions and exclamation", 1393},
      {"story", 1092},
      {"poem", 916},
      {"tourism", 782},
      {"miscellaneous", 700},
      {"sport", 683},
      {"education and literature", 619},
      {"news", 608},
      {"science", 543},
      {"health", 483},
      {"politics", 483},
      {"general information", 461},
      {"interview", 456},
  };
  return counts;
}

// Test-split topic sizes.
inline const std::vector<std::pair<std::string, int>>& TestTopicCounts() {
  static const std::vector<std::pair<std::string, int>> counts = {
      {"News", 10},          {"Formal Letter", 10},
      {"Sport", 9},          {"Poem", 8},
      {"Questions", 7},      {"Psychology", 6},
      {"Health", 6},         {"Science", 6},
      {"Miscellaneous", 6},  {"General Information", 6},
      {"Story", 6},          {"Tourism", 6},
      {"Linguistics", 5},    {"Interview", 5},
      {"Politics", 5},       {"Education and Literature", 5},
      {"Exclamation", 4},
  };
  return counts;
}

struct BenchmarkRow {
  std::string category;
  double genuine;
  double hifigan_pretrain;
  double waveglow_english;
  double ours;
};

// Per-category MOS for the four benchmarked systems.
inline const std::vector<BenchmarkRow>& BenchmarkTable() {
  static const std::vector<BenchmarkRow> rows = {
      {"News", 5.0, 4.2, 4.5, 4.92},
      {"Sports", 4.9, 4.1, 4.4, 4.75},
      {"Linguistics", 4.8, 4.0, 4.3, 4.93},
      {"Psychology", 5.0, 4.3, 4.6, 4.97},
      {"Poem", 4.9, 4.2, 4.5, 4.83},
      {"Health", 4.8, 4.1, 4.4, 4.99},
      {"Questions", 5.0, 4.2, 4.5, 4.96},
      {"Exclamation", 5.0, 4.2, 4.5, 4.96},
      {"Science", 4.9, 4.1, 4.4, 5.00},
      {"Miscellaneous", 4.8, 4.0, 4.3, 4.94},
      {"General Info", 4.9, 4.2, 4.5, 4.92},
      {"Interviews", 4.9, 4.2, 4.5, 4.88},
      {"Politics", 5.0, 4.3, 4.6, 4.78},
      {"Education & Lit", 4.8, 4.0, 4.3, 4.93},
      {"Story", 4.9, 4.2, 4.5, 4.75},
      {"Tourism", 4.9, 4.2, 4.5, 5.00},
      {"SMS", 4.8, 4.0, 4.3, 4.91},
  };
  return rows;
}

// 100 ratings per category (20 raters x 5 sentences), all 4s and 5s, so a
// two-decimal mean m in [4, 5] is hit exactly with round(100 m) - 400 fives.
inline std::vector<evaluation::RatingRecord> RatingsForMeans(
    const std::string& model_id,
    const std::vector<std::pair<std::string, double>>& means) {
  std::vector<evaluation::RatingRecord> out;
  int64_t ts = 1700000000;
  for (const auto& [category, mean] : means) {
    const int fives = static_cast<int>(std::lround(mean * 100.0)) - 400;
    int k = 0;
    for (int rater = 0; rater < 20; ++rater) {
      for (int s = 0; s < 5; ++s, ++k) {
        evaluation::RatingRecord r;
        r.rater_id = "rater" + std::to_string(rater);
        r.sample_id = model_id + "/" + category + "/" + std::to_string(s);
        r.category = category;
        r.model_id = model_id;
        r.score = k < fives ? 5 : 4;
        r.timestamp = ts++;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

inline std::vector<std::pair<std::string, double>> Column(
    double BenchmarkRow::*field) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& row : BenchmarkTable()) out.emplace_back(row.category, row.*field);
  return out;
}

}  // namespace flowvoc::testing

#endif  // FLOWVOC_TESTS_SUPPORT_TEST_UTIL_H_
