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

#include "flowvoc/flow/config.h"

#include <set>

#include "flowvoc/error.h"

namespace flowvoc::flow {

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kConfigInvalid, what);
}

}  // namespace

void FlowConfig::Validate() const {
  if (n_mel_channels < 1) Invalid("n_mel_channels must be >= 1");
  if (n_flows < 1) Invalid("n_flows must be >= 1");
  if (group_size < 1) Invalid("group_size must be >= 1");
  if (early_every < 1) Invalid("early_every must be >= 1");
  if (early_size < 0) Invalid("early_size must be >= 0");
  if (wn_layers < 1) Invalid("wn_layers must be >= 1");
  if (wn_channels < 1) Invalid("wn_channels must be >= 1");
  if (wn_kernel < 1 || wn_kernel % 2 == 0) Invalid("wn_kernel must be odd");
  if (!(sigma_train > 0.0)) Invalid("sigma_train must be positive");
  if (upsampler != "repeat") {
    Invalid("upsampler '" + upsampler + "' is not supported (use 'repeat')");
  }
  int emitted = 0;
  for (int k = 0; k < n_flows; ++k) {
    if (EmitsAfter(k)) emitted += early_size;
  }
  if (emitted >= group_size) {
    Invalid("early outputs (" + std::to_string(emitted) +
            " channels) leave no channels for the final flow of group " +
            std::to_string(group_size));
  }
}

std::vector<int> FlowConfig::LiveChannels() const {
  std::vector<int> live(n_flows);
  int channels = group_size;
  for (int k = 0; k < n_flows; ++k) {
    live[k] = channels;
    if (EmitsAfter(k)) channels -= early_size;
  }
  return live;
}

int FlowConfig::FinalChannels() const { return LiveChannels().back(); }

void FlowConfig::WriteTo(TextMap& map, std::string_view prefix) const {
  const std::string p(prefix);
  map.SetInt(p + "n_mel_channels", n_mel_channels);
  map.SetInt(p + "n_flows", n_flows);
  map.SetInt(p + "group_size", group_size);
  map.SetInt(p + "early_every", early_every);
  map.SetInt(p + "early_size", early_size);
  map.SetInt(p + "wn_layers", wn_layers);
  map.SetInt(p + "wn_channels", wn_channels);
  map.SetInt(p + "wn_kernel", wn_kernel);
  map.SetDouble(p + "sigma_train", sigma_train);
  map.Set(p + "upsampler", upsampler);
}

void FlowConfig::ApplyOverrides(const TextMap& map, std::string_view prefix) {
  const std::string p(prefix);
  const auto set_int = [&](const char* name, int& field) {
    if (map.Contains(p + name)) {
      field = static_cast<int>(map.GetInt(p + name));
    }
  };
  set_int("n_mel_channels", n_mel_channels);
  set_int("n_flows", n_flows);
  set_int("group_size", group_size);
  set_int("early_every", early_every);
  set_int("early_size", early_size);
  set_int("wn_layers", wn_layers);
  set_int("wn_channels", wn_channels);
  set_int("wn_kernel", wn_kernel);
  if (map.Contains(p + "sigma_train")) {
    sigma_train = map.GetDouble(p + "sigma_train");
  }
  if (auto v = map.Find(p + "upsampler")) upsampler = *v;

  static const std::set<std::string> kKnown = {
      "n_mel_channels", "n_flows",   "group_size", "early_every",
      "early_size",     "wn_layers", "wn_channels", "wn_kernel",
      "sigma_train",    "upsampler"};
  for (const auto& [key, value] : map.entries()) {
    if (key.rfind(p, 0) == 0 && !kKnown.count(key.substr(p.size()))) {
      Invalid("unknown flow config key '" + key + "'");
    }
  }
}

}  // namespace flowvoc::flow
