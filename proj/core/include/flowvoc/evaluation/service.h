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

#ifndef FLOWVOC_EVALUATION_SERVICE_H_
#define FLOWVOC_EVALUATION_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowvoc/evaluation/ratings.h"

namespace flowvoc::evaluation {

struct SampleEntry {
  std::string sample_id;
  std::string category;
  std::string model_id;
  std::filesystem::path wav_path;
};

inline constexpr char kSampleIndexName[] = "samples.tsv";

// `dir/samples.tsv`, one sample per line:
//   sample_id  category  model_id  wav_file
// wav_file is resolved against `dir`. Errors: kIoFailure (index or WAV
// missing), kParseError, kDuplicateId, kCorpusEmpty.
std::vector<SampleEntry> LoadSampleStore(const std::filesystem::path& dir);

struct ServiceConfig {
  std::vector<SampleEntry> samples;
  std::filesystem::path ratings_path;
  uint64_t seed = 1234;
  // Served at "/" when set.
  std::optional<std::filesystem::path> static_dir;
  // Seconds since the epoch; defaults to the system clock.
  std::function<int64_t()> clock;
};

// Listening-test backend. A session id doubles as the rater id; opening a
// session with GET .../next fixes its sample order as a shuffle seeded by
// seed ^ FNV-1a(id). Accepted ratings are appended to the ratings CSV and
// flushed to disk before the response is sent. On construction an existing
// ratings file is replayed, so a restarted service resumes every session.
//
//   GET  /api/session/{id}/next    {sample_id, category, audio_url,
//                                   position, total} or {done, total, mean}
//   GET  /api/audio/{sample_id}    audio/wav
//   POST /api/session/{id}/rating  {sample_id, score} -> {accepted: true}
//   GET  /api/report[?model=id]    MOS report JSON
//
// Rating errors: 400 malformed body or score outside 1..5, 404 unknown
// session or sample, 409 sample is not the session's current one.
class ListeningTestService {
 public:
  // Errors from replaying the ratings file propagate (kParseError,
  // kDuplicateRating, kScoreOutOfRange), plus kParseError for ratings that
  // reference unknown samples.
  explicit ListeningTestService(ServiceConfig config);
  ~ListeningTestService();

  ListeningTestService(const ListeningTestService&) = delete;
  ListeningTestService& operator=(const ListeningTestService&) = delete;

  // kIoFailure if the address cannot be bound. Port 0 picks a free port.
  // Returns the bound port.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  void Listen();
  void Stop();
  // Blocks until Listen() is accepting connections.
  void WaitUntilReady();

  // Session queue in presentation order.
  std::vector<std::string> SessionOrder(const std::string& session_id) const;
  std::vector<RatingRecord> Ratings() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace flowvoc::evaluation

#endif  // FLOWVOC_EVALUATION_SERVICE_H_
