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

#ifndef FLOWVOC_FLOW_MODEL_H_
#define FLOWVOC_FLOW_MODEL_H_

#include <cstddef>
#include <vector>

#include "flowvoc/flow/config.h"
#include "flowvoc/numerics/tensor.h"
#include "flowvoc/random.h"

namespace flowvoc::flow {

using numerics::Parameter;
using numerics::Tensor;

// Parameters of one coupling network. It reads the pass-through half x_a
// (in_channels rows) and emits log-scale and shift for the transformed half
// (out_channels rows each).
//
//   h_0      = start(x_a)
//   pre_i    = in_i(h_i) [dilation 2^i] + cond_i(mel)
//   acts_i   = tanh(pre_i[:H]) * sigmoid(pre_i[H:])
//   rs_i     = res_skip_i(acts_i)
//   h_{i+1}  = h_i + rs_i[:H]        (all but the last layer)
//   skip    += rs_i[H:]              (last layer: skip += rs_i)
//   log_s|b  = end(skip)             (end is zero-initialized)
template <typename T>
struct WaveNetParams {
  int in_channels = 0;
  int out_channels = 0;
  int hidden = 0;
  int layers = 0;
  int kernel = 0;

  Parameter<T> start_w, start_b;
  std::vector<Parameter<T>> cond_w, cond_b;
  std::vector<Parameter<T>> in_w, in_b;
  std::vector<Parameter<T>> res_skip_w, res_skip_b;
  Parameter<T> end_w, end_b;

  // Visits parameters in serialization order.
  template <typename F>
  void ForEach(F&& f) {
    f(start_w);
    f(start_b);
    for (int i = 0; i < layers; ++i) {
      f(cond_w[i]);
      f(cond_b[i]);
      f(in_w[i]);
      f(in_b[i]);
      f(res_skip_w[i]);
      f(res_skip_b[i]);
    }
    f(end_w);
    f(end_b);
  }
  template <typename F>
  void ForEach(F&& f) const {
    const_cast<WaveNetParams*>(this)->ForEach(
        [&](const Parameter<T>& p) { f(p); });
  }
};

template <typename T>
struct FlowModel {
  FlowConfig config;
  // W_k, square, sized to the live channel count of flow k.
  std::vector<Parameter<T>> inv_convs;
  std::vector<WaveNetParams<T>> couplings;

  template <typename F>
  void ForEachParameter(F&& f) {
    for (size_t k = 0; k < inv_convs.size(); ++k) {
      f(inv_convs[k]);
      couplings[k].ForEach(f);
    }
  }
  template <typename F>
  void ForEachParameter(F&& f) const {
    const_cast<FlowModel*>(this)->ForEachParameter(
        [&](const Parameter<T>& p) { f(p); });
  }

  void ZeroGrad() {
    ForEachParameter([](Parameter<T>& p) { p.ZeroGrad(); });
  }

  size_t NumScalars() const {
    size_t n = 0;
    ForEachParameter([&](const Parameter<T>& p) { n += p.value.size(); });
    return n;
  }
};

// All parameters allocated with their names and shapes; W_k = identity and
// every other tensor zero. Loading fills values into this skeleton.
template <typename T>
FlowModel<T> BuildFlowModel(const FlowConfig& config);

// W_k random orthogonal with det +1, coupling layers uniform in
// +-1/sqrt(fan_in), final coupling layer zero so each coupling starts as the
// identity.
template <typename T>
FlowModel<T> InitFlowModel(const FlowConfig& config, Rng& rng);

// Overwrites every coupling tensor (including the zero-initialized end layer)
// with uniform noise of the given scale; used by tests and self-checks that
// need a non-trivial coupling.
template <typename T>
void RandomizeCouplings(FlowModel<T>& model, Rng& rng, double scale);

// Orthogonal matrix from the QR of a Gaussian matrix, determinant +1.
std::vector<double> RandomOrthogonal(int n, Rng& rng);

template <typename To, typename From>
FlowModel<To> CastModel(const FlowModel<From>& model) {
  FlowModel<To> out = BuildFlowModel<To>(model.config);
  std::vector<const Parameter<From>*> src;
  model.ForEachParameter([&](const Parameter<From>& p) { src.push_back(&p); });
  size_t i = 0;
  out.ForEachParameter([&](Parameter<To>& p) {
    p.value = src[i++]->value.template Cast<To>();
  });
  return out;
}

}  // namespace flowvoc::flow

#endif  // FLOWVOC_FLOW_MODEL_H_
