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

#include "flowvoc/corpus/manifest.h"

#include <fstream>
#include <iterator>
#include <unordered_map>
#include <unordered_set>

#include "flowvoc/corpus/normalize.h"
#include "flowvoc/error.h"

namespace flowvoc::corpus {

namespace {

constexpr size_t kFields = 5;

std::string Where(const std::filesystem::path& source, size_t line) {
  const std::string name = source.empty() ? "<manifest>" : source.string();
  return name + ":" + std::to_string(line) + ": ";
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string_view SplitName(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

Split ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  throw Error(ErrorCode::kParseError,
              "split must be train or test, got '" + std::string(text) + "'");
}

std::filesystem::path Manifest::ResolveAudio(
    const UtteranceRecord& record) const {
  const std::filesystem::path p(record.audio_path);
  if (p.is_absolute() || source_path.empty()) return p;
  return source_path.parent_path() / p;
}

std::vector<const UtteranceRecord*> Manifest::Select(Split split) const {
  std::vector<const UtteranceRecord*> out;
  for (const auto& r : records) {
    if (r.split == split) out.push_back(&r);
  }
  return out;
}

Manifest ParseManifest(std::string_view text,
                       const std::filesystem::path& source_path,
                       std::string_view normalizer) {
  if (!IsKnownNormalizer(normalizer)) NormalizeText("", normalizer);
  Manifest manifest;
  manifest.source_path = source_path;
  std::unordered_map<std::string, size_t> ids;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    const auto fields = SplitTabs(line);
    if (fields.size() != kFields) {
      throw Error(ErrorCode::kParseError,
                  Where(source_path, line_no) + "expected 5 tab-separated " +
                      "fields, got " + std::to_string(fields.size()));
    }
    UtteranceRecord r;
    r.id = std::string(fields[0]);
    try {
      r.split = ParseSplit(fields[1]);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError,
                  Where(source_path, line_no) + "split must be train or test");
    }
    r.category = std::string(fields[2]);
    r.audio_path = std::string(fields[3]);
    r.text = std::string(fields[4]);
    r.line = line_no;
    if (r.id.empty()) {
      throw Error(ErrorCode::kParseError,
                  Where(source_path, line_no) + "empty id");
    }
    if (r.category.empty()) {
      throw Error(ErrorCode::kParseError,
                  Where(source_path, line_no) + "empty category");
    }
    if (r.audio_path.empty() && r.split == Split::kTrain) {
      throw Error(ErrorCode::kParseError,
                  Where(source_path, line_no) + "empty audio_path");
    }
    if (auto [it, inserted] = ids.emplace(r.id, line_no); !inserted) {
      throw Error(ErrorCode::kDuplicateId,
                  Where(source_path, line_no) + "id '" + r.id +
                      "' already used on line " + std::to_string(it->second));
    }
    manifest.records.push_back(std::move(r));
  }

  std::unordered_map<std::string, size_t> train_texts;
  for (const auto& r : manifest.records) {
    if (r.split == Split::kTrain) {
      train_texts.emplace(NormalizeText(r.text, normalizer), r.line);
    }
  }
  for (const auto& r : manifest.records) {
    if (r.split != Split::kTest) continue;
    const auto it = train_texts.find(NormalizeText(r.text, normalizer));
    if (it != train_texts.end()) {
      throw Error(ErrorCode::kSplitLeak,
                  Where(source_path, r.line) + "test text of '" + r.id +
                      "' also appears in train on line " +
                      std::to_string(it->second));
    }
  }
  return manifest;
}

Manifest LoadManifest(const std::filesystem::path& path,
                      std::string_view normalizer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseManifest(text, path, normalizer);
}

std::string FormatManifest(const Manifest& manifest) {
  std::string out;
  for (const auto& r : manifest.records) {
    for (const std::string* f :
         {&r.id, &r.category, &r.audio_path, &r.text}) {
      if (f->find_first_of("\t\n\r") != std::string::npos) {
        throw Error(ErrorCode::kParseError,
                    "record '" + r.id + "' has a field with a tab or newline");
      }
    }
    out += r.id;
    out += '\t';
    out += SplitName(r.split);
    out += '\t';
    out += r.category;
    out += '\t';
    out += r.audio_path;
    out += '\t';
    out += r.text;
    out += '\n';
  }
  return out;
}

void WriteManifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  const std::string text = FormatManifest(manifest);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
    throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

std::map<std::string, size_t> CategoryStats(const Manifest& manifest,
                                            Split split) {
  std::map<std::string, size_t> counts;
  for (const auto& r : manifest.records) {
    if (r.split == split) ++counts[r.category];
  }
  return counts;
}

}  // namespace flowvoc::corpus
