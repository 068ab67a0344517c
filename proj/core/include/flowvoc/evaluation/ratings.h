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

#ifndef FLOWVOC_EVALUATION_RATINGS_H_
#define FLOWVOC_EVALUATION_RATINGS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace flowvoc::evaluation {

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;
inline constexpr char kRatingsHeader[] =
    "rater_id,sample_id,category,model_id,score,timestamp";

struct RatingRecord {
  std::string rater_id;
  std::string sample_id;
  std::string category;
  std::string model_id;
  int score = 0;
  int64_t timestamp = 0;  // seconds since the Unix epoch

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

// Likert labels for scores 1..5.
std::string_view ScoreLabel(int score);

// RFC 4180 CSV with the header above. An empty input yields no records.
// Errors carry the 1-based line number: kParseError (bad header, field
// count, quoting, non-integer score or timestamp), kScoreOutOfRange,
// kDuplicateRating (same rater, sample and model twice).
std::vector<RatingRecord> ParseRatingsCsv(std::string_view text,
                                          std::string_view source = {});
std::vector<RatingRecord> IngestRatings(const std::filesystem::path& path);

// One CSV row without the trailing newline; fields are quoted only when
// they contain a comma, quote, CR or LF.
std::string FormatRatingRow(const RatingRecord& r);
// Header plus one row per record.
std::string FormatRatingsCsv(const std::vector<RatingRecord>& records);
void ExportRatings(const std::vector<RatingRecord>& records,
                   const std::filesystem::path& path);

}  // namespace flowvoc::evaluation

#endif  // FLOWVOC_EVALUATION_RATINGS_H_
