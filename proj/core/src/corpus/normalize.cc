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

#include "flowvoc/corpus/normalize.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "flowvoc/error.h"

namespace flowvoc::corpus {

namespace {

void RequireUtf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw Error(ErrorCode::kParseError,
                  "invalid UTF-8 at byte " + std::to_string(i - 1));
    }
  }
}

std::string NfcTrim(std::string_view text) {
  RequireUtf8(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kIoFailure,
                std::string("ICU NFC data unavailable: ") + u_errorName(status));
  }
  const icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  const icu::UnicodeString composed = nfc->normalize(input, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kParseError,
                std::string("NFC failed: ") + u_errorName(status));
  }

  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    const UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) out.append(static_cast<UChar>(u' '));
    pending_space = false;
    out.append(c);
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

}  // namespace

std::vector<std::string> KnownNormalizers() { return {"identity", "nfc-trim"}; }

bool IsKnownNormalizer(std::string_view normalizer) {
  return normalizer == "identity" || normalizer == "nfc-trim";
}

std::string NormalizeText(std::string_view text, std::string_view normalizer) {
  if (normalizer == "identity") return std::string(text);
  if (normalizer == "nfc-trim") return NfcTrim(text);
  throw Error(ErrorCode::kUnknownNormalizer,
              "unknown normalizer '" + std::string(normalizer) +
                  "' (known: identity, nfc-trim)");
}

}  // namespace flowvoc::corpus
