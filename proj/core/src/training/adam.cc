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

#include "flowvoc/training/adam.h"

#include <cmath>

#include "flowvoc/error.h"

namespace flowvoc::training {

AdamState InitAdam(const flow::FlowModel<float>& model) {
  AdamState state;
  model.ForEachParameter([&](const numerics::Parameter<float>& p) {
    state.m.emplace_back(p.value.shape());
    state.v.emplace_back(p.value.shape());
  });
  return state;
}

void AdamUpdateTensor(Tensor<float>& param, const Tensor<float>& grad,
                      Tensor<float>& m, Tensor<float>& v, int64_t step,
                      double lr, const TrainConfig& cfg) {
  if (!param.SameShape(grad) || !param.SameShape(m) || !param.SameShape(v)) {
    throw Error(ErrorCode::kShapeMismatch, "Adam state does not match param");
  }
  const double b1 = cfg.beta1;
  const double b2 = cfg.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
  for (size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double mi = b1 * m[i] + (1.0 - b1) * g;
    const double vi = b2 * v[i] + (1.0 - b2) * g * g;
    m[i] = static_cast<float>(mi);
    v[i] = static_cast<float>(vi);
    const double update = lr * (mi / c1) / (std::sqrt(vi / c2) + cfg.adam_epsilon);
    param[i] = static_cast<float>(param[i] - update);
  }
}

void AdamUpdate(flow::FlowModel<float>& model, AdamState& state, double lr,
                const TrainConfig& cfg) {
  size_t count = 0;
  model.ForEachParameter([&](const numerics::Parameter<float>&) { ++count; });
  if (state.m.size() != count || state.v.size() != count) {
    throw Error(ErrorCode::kShapeMismatch,
                "Adam state has " + std::to_string(state.m.size()) +
                    " slots, model has " + std::to_string(count));
  }
  ++state.step;
  size_t i = 0;
  model.ForEachParameter([&](numerics::Parameter<float>& p) {
    AdamUpdateTensor(p.value, p.grad, state.m[i], state.v[i], state.step, lr,
                     cfg);
    ++i;
  });
}

}  // namespace flowvoc::training
