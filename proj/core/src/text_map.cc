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

#include "flowvoc/text_map.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

#include "flowvoc/error.h"

namespace flowvoc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotWav: return "NotWav";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNotDivisible: return "NotDivisible";
    case ErrorCode::kMelTooShort: return "MelTooShort";
    case ErrorCode::kSingularW: return "SingularW";
    case ErrorCode::kNonFiniteScale: return "NonFiniteScale";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kCorpusEmpty: return "CorpusEmpty";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kSplitLeak: return "SplitLeak";
    case ErrorCode::kUnknownNormalizer: return "UnknownNormalizer";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::kDuplicateRating: return "DuplicateRating";
  }
  return "Unknown";
}

bool IsDataError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoFailure:
    case ErrorCode::kNonFinite:
    case ErrorCode::kNonFiniteLoss:
    case ErrorCode::kNonFiniteScale:
      return false;
    default:
      return true;
  }
}

namespace {

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

TextMap TextMap::Parse(std::string_view text) {
  TextMap map;
  size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": empty key");
    }
    if (map.Contains(key)) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                              ": duplicate key '" +
                                              std::string(key) + "'");
    }
    map.entries_.emplace_back(std::string(key),
                              std::string(Trim(line.substr(eq + 1))));
  }
  return map;
}

std::string TextMap::Serialize() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

void TextMap::Set(std::string_view key, std::string value) {
  for (auto& entry : entries_) {
    if (entry.first == key) {
      entry.second = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::string(key), std::move(value));
}

void TextMap::SetInt(std::string_view key, int64_t value) {
  Set(key, std::to_string(value));
}

void TextMap::SetUint(std::string_view key, uint64_t value) {
  Set(key, std::to_string(value));
}

void TextMap::SetDouble(std::string_view key, double value) {
  Set(key, FormatDouble(value));
}

bool TextMap::Contains(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

std::optional<std::string> TextMap::Find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

const std::string& TextMap::Get(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw Error(ErrorCode::kParseError, "missing key '" + std::string(key) + "'");
}

int64_t TextMap::GetInt(std::string_view key) const {
  try {
    return ParseInt(Get(key));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError,
                "key '" + std::string(key) + "': " + e.what());
  }
}

uint64_t TextMap::GetUint(std::string_view key) const {
  const std::string& text = Get(key);
  uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError, "key '" + std::string(key) +
                                            "': not an unsigned integer: '" +
                                            text + "'");
  }
  return value;
}

double TextMap::GetDouble(std::string_view key) const {
  try {
    return ParseDouble(Get(key));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError,
                "key '" + std::string(key) + "': " + e.what());
  }
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kNonFinite, "cannot format double");
  }
  return std::string(buf, ptr);
}

double ParseDouble(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                "not a number: '" + std::string(text) + "'");
  }
  return value;
}

int64_t ParseInt(std::string_view text) {
  int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kParseError,
                "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace flowvoc
