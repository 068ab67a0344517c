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

#ifndef FLOWVOC_TEXT_MAP_H_
#define FLOWVOC_TEXT_MAP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowvoc {

// Ordered `key=value` map, one entry per line. Used both for checkpoint
// headers and for user config files. Lines starting with '#' and blank lines
// are ignored when parsing. Insertion order is preserved so that
// serialization is deterministic.
class TextMap {
 public:
  static TextMap Parse(std::string_view text);

  std::string Serialize() const;

  // Replaces the value if the key exists, appends otherwise.
  void Set(std::string_view key, std::string value);
  void SetInt(std::string_view key, int64_t value);
  void SetUint(std::string_view key, uint64_t value);
  // Shortest representation that round-trips exactly.
  void SetDouble(std::string_view key, double value);

  bool Contains(std::string_view key) const;
  std::optional<std::string> Find(std::string_view key) const;

  // The Get* accessors throw Error(kParseError) when the key is missing or the
  // value does not parse.
  const std::string& Get(std::string_view key) const;
  int64_t GetInt(std::string_view key) const;
  uint64_t GetUint(std::string_view key) const;
  double GetDouble(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string FormatDouble(double value);
double ParseDouble(std::string_view text);
int64_t ParseInt(std::string_view text);

// 64-bit FNV-1a, used for config fingerprints and per-rater seeds.
uint64_t Fnv1a64(std::string_view bytes);

}  // namespace flowvoc

#endif  // FLOWVOC_TEXT_MAP_H_
