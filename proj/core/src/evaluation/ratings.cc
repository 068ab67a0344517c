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

#include "flowvoc/evaluation/ratings.h"

#include <fstream>
#include <iterator>
#include <set>
#include <tuple>

#include "flowvoc/error.h"
#include "flowvoc/text_map.h"

namespace flowvoc::evaluation {

namespace {

struct CsvRow {
  size_t line = 0;
  std::vector<std::string> fields;
};

std::string Where(std::string_view source, size_t line) {
  return (source.empty() ? std::string("<ratings>") : std::string(source)) +
         ":" + std::to_string(line) + ": ";
}

std::vector<CsvRow> ReadCsv(std::string_view text, std::string_view source) {
  std::vector<CsvRow> rows;
  size_t i = 0;
  size_t line = 1;
  while (i < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool done = false;
    while (!done) {
      if (i < text.size() && text[i] == '"') {
        ++i;
        while (true) {
          if (i >= text.size()) {
            throw Error(ErrorCode::kParseError,
                        Where(source, row.line) + "unterminated quoted field");
          }
          const char c = text[i++];
          if (c == '"') {
            if (i < text.size() && text[i] == '"') {
              field += '"';
              ++i;
            } else {
              break;
            }
          } else {
            if (c == '\n') ++line;
            field += c;
          }
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' &&
            text[i] != '\r') {
          throw Error(ErrorCode::kParseError,
                      Where(source, line) + "text after closing quote");
        }
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' &&
               text[i] != '\r') {
          if (text[i] == '"') {
            throw Error(ErrorCode::kParseError,
                        Where(source, line) + "stray quote in field");
          }
          field += text[i++];
        }
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (i >= text.size()) {
        done = true;
      } else if (text[i] == ',') {
        ++i;
      } else {
        if (text[i] == '\r') ++i;
        if (i < text.size() && text[i] == '\n') ++i;
        ++line;
        done = true;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool NeedsQuoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string Quote(const std::string& s) {
  if (!NeedsQuoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view ScoreLabel(int score) {
  switch (score) {
    case 1: return "Bad";
    case 2: return "Poor";
    case 3: return "Fair";
    case 4: return "Good";
    case 5: return "Excellent";
  }
  throw Error(ErrorCode::kScoreOutOfRange,
              "score " + std::to_string(score) + " outside 1..5");
}

std::vector<RatingRecord> ParseRatingsCsv(std::string_view text,
                                          std::string_view source) {
  std::vector<RatingRecord> out;
  const std::vector<CsvRow> rows = ReadCsv(text, source);
  if (rows.empty()) return out;

  std::string header;
  for (size_t i = 0; i < rows[0].fields.size(); ++i) {
    if (i) header += ',';
    header += rows[0].fields[i];
  }
  if (header != kRatingsHeader) {
    throw Error(ErrorCode::kParseError,
                Where(source, 1) + "expected header '" + kRatingsHeader + "'");
  }

  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() == 1 && row.fields[0].empty()) continue;
    if (row.fields.size() != 6) {
      throw Error(ErrorCode::kParseError,
                  Where(source, row.line) + "expected 6 fields, got " +
                      std::to_string(row.fields.size()));
    }
    RatingRecord rec;
    rec.rater_id = row.fields[0];
    rec.sample_id = row.fields[1];
    rec.category = row.fields[2];
    rec.model_id = row.fields[3];
    int64_t score = 0;
    try {
      score = ParseInt(row.fields[4]);
      rec.timestamp = ParseInt(row.fields[5]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, Where(source, row.line) + e.what());
    }
    if (rec.rater_id.empty() || rec.sample_id.empty() ||
        rec.category.empty() || rec.model_id.empty()) {
      throw Error(ErrorCode::kParseError,
                  Where(source, row.line) + "empty identifier field");
    }
    if (score < kMinScore || score > kMaxScore) {
      throw Error(ErrorCode::kScoreOutOfRange,
                  Where(source, row.line) + "score " + row.fields[4] +
                      " outside 1..5");
    }
    rec.score = static_cast<int>(score);
    if (!seen.emplace(rec.rater_id, rec.sample_id, rec.model_id).second) {
      throw Error(ErrorCode::kDuplicateRating,
                  Where(source, row.line) + "rater '" + rec.rater_id +
                      "' already rated sample '" + rec.sample_id +
                      "' of model '" + rec.model_id + "'");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<RatingRecord> IngestRatings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseRatingsCsv(text, path.string());
}

std::string FormatRatingRow(const RatingRecord& r) {
  return Quote(r.rater_id) + "," + Quote(r.sample_id) + "," +
         Quote(r.category) + "," + Quote(r.model_id) + "," +
         std::to_string(r.score) + "," + std::to_string(r.timestamp);
}

std::string FormatRatingsCsv(const std::vector<RatingRecord>& records) {
  std::string out = std::string(kRatingsHeader) + "\n";
  for (const auto& r : records) out += FormatRatingRow(r) + "\n";
  return out;
}

void ExportRatings(const std::vector<RatingRecord>& records,
                   const std::filesystem::path& path) {
  const std::string text = FormatRatingsCsv(records);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

}  // namespace flowvoc::evaluation
