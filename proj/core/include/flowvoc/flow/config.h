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

#ifndef FLOWVOC_FLOW_CONFIG_H_
#define FLOWVOC_FLOW_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "flowvoc/text_map.h"

namespace flowvoc::flow {

// Flow topology. Defaults follow the reference configuration: 12 flows over
// groups of 8 samples, 2 channels emitted early after every 4th flow, and an
// 8-layer, 256-channel, kernel-3 coupling network.
struct FlowConfig {
  int n_mel_channels = 80;
  int n_flows = 12;
  int group_size = 8;
  int early_every = 4;
  int early_size = 2;
  int wn_layers = 8;
  int wn_channels = 256;
  int wn_kernel = 3;
  double sigma_train = 1.0;
  // Only "repeat" (parameter-free nearest-frame repetition) is implemented.
  std::string upsampler = "repeat";

  // Throws kConfigInvalid.
  void Validate() const;

  // True if the first early_size channels leave the stack after flow k
  // (0-based). The last flow never emits early.
  bool EmitsAfter(int k) const {
    return early_size > 0 && (k + 1) % early_every == 0 && k + 1 < n_flows;
  }

  // Channel count entering each flow; size n_flows.
  std::vector<int> LiveChannels() const;
  int FinalChannels() const;

  void WriteTo(TextMap& map, std::string_view prefix = "flow.") const;
  // Overwrites fields whose keys are present; rejects unknown keys under
  // `prefix` with kConfigInvalid.
  void ApplyOverrides(const TextMap& map, std::string_view prefix = "flow.");

  friend bool operator==(const FlowConfig&, const FlowConfig&) = default;
};

}  // namespace flowvoc::flow

#endif  // FLOWVOC_FLOW_CONFIG_H_
