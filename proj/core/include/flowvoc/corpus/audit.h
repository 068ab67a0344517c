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

#ifndef FLOWVOC_CORPUS_AUDIT_H_
#define FLOWVOC_CORPUS_AUDIT_H_

#include <string>
#include <vector>

#include "flowvoc/corpus/manifest.h"

namespace flowvoc::corpus {

enum class AuditMode {
  kDecode,    // fully decode every file
  kMetadata,  // read WAV headers only
};

struct AuditIssue {
  std::string id;
  std::string path;
  std::string reason;

  friend bool operator==(const AuditIssue&, const AuditIssue&) = default;
};

struct AuditReport {
  std::vector<AuditIssue> missing;
  std::vector<AuditIssue> wrong_format;
  size_t checked = 0;   // files that passed
  size_t skipped = 0;   // records without audio
  double total_seconds = 0.0;
};

// Visits records in manifest order. Files that are absent land in
// `missing`; files that cannot be read as 16-bit PCM mono at the corpus rate
// land in `wrong_format`. Only passing files count towards the duration.
AuditReport AuditAudio(const Manifest& manifest,
                       AuditMode mode = AuditMode::kDecode);

// `key<TAB>value` lines followed by one line per issue.
std::string FormatAuditText(const AuditReport& report);
std::string FormatAuditJson(const AuditReport& report);

}  // namespace flowvoc::corpus

#endif  // FLOWVOC_CORPUS_AUDIT_H_
