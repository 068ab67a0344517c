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

#ifndef FLOWVOC_CORPUS_MANIFEST_H_
#define FLOWVOC_CORPUS_MANIFEST_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace flowvoc::corpus {

enum class Split { kTrain, kTest };

std::string_view SplitName(Split split);
// kParseError for anything but "train" or "test".
Split ParseSplit(std::string_view text);

struct UtteranceRecord {
  std::string id;
  Split split = Split::kTrain;
  std::string category;
  std::string audio_path;  // may be empty for test records
  std::string text;
  size_t line = 0;         // 1-based source line, 0 if not loaded from text

  // Line numbers are diagnostics only and do not take part in equality.
  friend bool operator==(const UtteranceRecord& a, const UtteranceRecord& b) {
    return a.id == b.id && a.split == b.split && a.category == b.category &&
           a.audio_path == b.audio_path && a.text == b.text;
  }
};

struct Manifest {
  std::vector<UtteranceRecord> records;
  std::filesystem::path source_path;

  // audio_path, resolved against the manifest's directory when relative.
  std::filesystem::path ResolveAudio(const UtteranceRecord& record) const;

  std::vector<const UtteranceRecord*> Select(Split split) const;
};

// One record per line, tab separated:
//   id  split  category  audio_path  text
// Blank lines are skipped. Validation: five fields, non-empty id and
// category, non-empty audio_path for train records, unique ids, and no text
// shared between train and test after applying `normalizer`.
// Errors: kParseError (message carries the line number), kDuplicateId,
// kSplitLeak, kUnknownNormalizer.
Manifest ParseManifest(std::string_view text,
                       const std::filesystem::path& source_path = {},
                       std::string_view normalizer = "identity");
Manifest LoadManifest(const std::filesystem::path& path,
                      std::string_view normalizer = "identity");

// Inverse of ParseManifest. kParseError if a field contains a tab or newline.
std::string FormatManifest(const Manifest& manifest);
void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);

// Record count per category for one split.
std::map<std::string, size_t> CategoryStats(const Manifest& manifest,
                                            Split split);

}  // namespace flowvoc::corpus

#endif  // FLOWVOC_CORPUS_MANIFEST_H_
