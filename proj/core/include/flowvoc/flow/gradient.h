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

#ifndef FLOWVOC_FLOW_GRADIENT_H_
#define FLOWVOC_FLOW_GRADIENT_H_

#include <span>

#include "flowvoc/flow/flow.h"

namespace flowvoc::flow {

// Runs the forward pass, evaluates the negative log-likelihood and adds
// `scale * d(total)/d(theta)` into every parameter's grad, including the
// -(frames / n) * W^-T contribution of each log-determinant. Coupling
// activations are recomputed flow by flow during the backward sweep, so
// only the per-flow inputs are held in memory.
template <typename T>
LossBreakdown AccumulateLossGradient(FlowModel<T>& model,
                                     std::span<const T> segment,
                                     const Tensor<T>& cond, double sigma,
                                     double scale = 1.0);

}  // namespace flowvoc::flow

#endif  // FLOWVOC_FLOW_GRADIENT_H_
