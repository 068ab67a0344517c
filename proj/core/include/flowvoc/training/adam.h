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

#ifndef FLOWVOC_TRAINING_ADAM_H_
#define FLOWVOC_TRAINING_ADAM_H_

#include <cstdint>
#include <vector>

#include "flowvoc/flow/model.h"
#include "flowvoc/training/config.h"

namespace flowvoc::training {

using numerics::Tensor;

// First and second moments, one tensor per model parameter in
// ForEachParameter order.
struct AdamState {
  int64_t step = 0;
  std::vector<Tensor<float>> m;
  std::vector<Tensor<float>> v;

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

// Zero moments shaped like the model's parameters.
AdamState InitAdam(const flow::FlowModel<float>& model);

// Increments the step counter and applies one bias-corrected update using
// the gradients currently stored in the model:
//   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
//   p -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
// kShapeMismatch if the state does not mirror the model.
void AdamUpdate(flow::FlowModel<float>& model, AdamState& state, double lr,
                const TrainConfig& cfg);

// Same rule on bare tensors; exposed for testing.
void AdamUpdateTensor(Tensor<float>& param, const Tensor<float>& grad,
                      Tensor<float>& m, Tensor<float>& v, int64_t step,
                      double lr, const TrainConfig& cfg);

}  // namespace flowvoc::training

#endif  // FLOWVOC_TRAINING_ADAM_H_
