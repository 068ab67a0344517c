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

#ifndef FLOWVOC_TOOLS_FLOWVOC_COMMANDS_H_
#define FLOWVOC_TOOLS_FLOWVOC_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flowvoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitRuntimeError = 3;

// Thrown for invalid flag combinations detected after parsing.
struct UsageError {
  std::string message;
};

struct PreprocessArgs {
  std::string manifest;
  std::string out_dir;
  std::string normalizer = "identity";
  std::string config;
  std::string json;
};

struct TrainArgs {
  std::string manifest;
  std::string out_dir;
  std::string config;
  std::string resume;
  std::optional<int64_t> iterations;
  std::optional<uint64_t> seed;
  bool dry_run = false;
  int64_t log_every = 100;
};

struct SynthesizeArgs {
  std::string checkpoint;
  std::string mel;
  std::string wav;
  std::string out;
  double sigma = 1.0;
  uint64_t seed = 1234;
};

struct CheckArgs {
  std::string checkpoint;
  std::string config;
  std::string mode = "all";
  uint64_t seed = 1234;
  std::string json;
};

struct MosArgs {
  std::string ratings;
  std::vector<std::string> compare;
  std::string model;
  std::string json;
};

struct ServeArgs {
  std::string samples;
  std::string out;
  std::string host = "127.0.0.1";
  int port = 8080;
  uint64_t seed = 1234;
  std::string static_dir;
};

// Each returns a process exit code; library errors propagate as exceptions.
int RunPreprocess(const PreprocessArgs& args);
int RunTrain(const TrainArgs& args);
int RunSynthesize(const SynthesizeArgs& args);
int RunCheck(const CheckArgs& args);
int RunMos(const MosArgs& args);
int RunServe(const ServeArgs& args);

}  // namespace flowvoc::cli

#endif  // FLOWVOC_TOOLS_FLOWVOC_COMMANDS_H_
