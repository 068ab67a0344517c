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

#ifndef FLOWVOC_ERROR_H_
#define FLOWVOC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace flowvoc {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto process exit codes, so keep DataErrorCode() in sync when adding.
enum class ErrorCode {
  kNotWav,
  kUnsupportedFormat,
  kEmptyAudio,
  kIoFailure,
  kConfigInvalid,
  kShapeMismatch,
  kNotDivisible,
  kMelTooShort,
  kSingularW,
  kNonFiniteScale,
  kNonFinite,
  kNonFiniteLoss,
  kCorpusEmpty,
  kVersionMismatch,
  kCorruptFile,
  kParseError,
  kDuplicateId,
  kSplitLeak,
  kUnknownNormalizer,
  kEmptyScores,
  kScoreOutOfRange,
  kDuplicateRating,
};

std::string_view ErrorCodeName(ErrorCode code);

// True for errors caused by bad input data or configuration, as opposed to
// runtime failures (I/O, numerical blow-up during training).
bool IsDataError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace flowvoc

#endif  // FLOWVOC_ERROR_H_
