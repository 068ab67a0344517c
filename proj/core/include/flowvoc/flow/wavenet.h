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

#ifndef FLOWVOC_FLOW_WAVENET_H_
#define FLOWVOC_FLOW_WAVENET_H_

#include <vector>

#include "flowvoc/flow/model.h"

namespace flowvoc::flow {

// Intermediate activations kept by a forward pass for the backward pass.
template <typename T>
struct WaveNetCache {
  Tensor<T> input;
  Tensor<T> cond;
  std::vector<Tensor<T>> hidden;     // h_i, one per layer
  std::vector<Tensor<T>> pre_tanh;   // pre_i[:H]
  std::vector<Tensor<T>> pre_gate;   // pre_i[H:]
  std::vector<Tensor<T>> acts;       // gated output of each layer
  Tensor<T> skip;
};

template <typename T>
struct WaveNetOutput {
  Tensor<T> log_s;  // [out_channels x T]
  Tensor<T> shift;  // [out_channels x T]
};

// x_a [in_channels x T], cond [n_mel x T]. `cache` may be null.
template <typename T>
WaveNetOutput<T> WaveNetForward(const WaveNetParams<T>& params,
                                const Tensor<T>& x_a, const Tensor<T>& cond,
                                WaveNetCache<T>* cache);

// Adds parameter gradients into params.*.grad and returns dL/dx_a.
template <typename T>
Tensor<T> WaveNetBackward(WaveNetParams<T>& params,
                          const WaveNetCache<T>& cache,
                          const Tensor<T>& grad_log_s,
                          const Tensor<T>& grad_shift);

}  // namespace flowvoc::flow

#endif  // FLOWVOC_FLOW_WAVENET_H_
