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

#ifndef FLOWVOC_CORPUS_NORMALIZE_H_
#define FLOWVOC_CORPUS_NORMALIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace flowvoc::corpus {

// Built-in normalizers:
//   identity  returns the input unchanged
//   nfc-trim  Unicode NFC, runs of whitespace collapsed to one space, trimmed
// kUnknownNormalizer for any other id; kParseError for invalid UTF-8 under
// nfc-trim.
std::string NormalizeText(std::string_view text, std::string_view normalizer);

bool IsKnownNormalizer(std::string_view normalizer);
std::vector<std::string> KnownNormalizers();

}  // namespace flowvoc::corpus

#endif  // FLOWVOC_CORPUS_NORMALIZE_H_
