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

#include "flowvoc/flow/wavenet.h"

#include "flowvoc/numerics/ops.h"

namespace flowvoc::flow {

using numerics::AddInPlace;
using numerics::ConcatRows;
using numerics::SliceRows;

template <typename T>
WaveNetOutput<T> WaveNetForward(const WaveNetParams<T>& params,
                                const Tensor<T>& x_a, const Tensor<T>& cond,
                                WaveNetCache<T>* cache) {
  const size_t h = static_cast<size_t>(params.hidden);
  const size_t len = x_a.dim(1);
  if (cond.rank() != 2 || cond.dim(1) != len) {
    throw Error(ErrorCode::kShapeMismatch,
                "conditioning " + numerics::ShapeString(cond.shape()) +
                    " does not match audio frames " + std::to_string(len));
  }
  Tensor<T> hidden = numerics::PointwiseConvForward(
      x_a, params.start_w.value, params.start_b.value);
  Tensor<T> skip({h, len});
  if (cache != nullptr) {
    cache->input = x_a;
    cache->cond = cond;
    cache->hidden.clear();
    cache->pre_tanh.clear();
    cache->pre_gate.clear();
    cache->acts.clear();
  }
  int dilation = 1;
  for (int i = 0; i < params.layers; ++i, dilation *= 2) {
    Tensor<T> pre = numerics::DilatedConv1dForward(
        hidden, params.in_w[i].value, params.in_b[i].value, dilation);
    AddInPlace(pre, numerics::PointwiseConvForward(
                        cond, params.cond_w[i].value, params.cond_b[i].value));
    Tensor<T> pre_tanh = SliceRows(pre, 0, h);
    Tensor<T> pre_gate = SliceRows(pre, h, 2 * h);
    Tensor<T> acts = numerics::GatedActivationForward(pre_tanh, pre_gate);
    const Tensor<T> rs = numerics::PointwiseConvForward(
        acts, params.res_skip_w[i].value, params.res_skip_b[i].value);
    if (cache != nullptr) {
      cache->hidden.push_back(hidden);
      cache->pre_tanh.push_back(std::move(pre_tanh));
      cache->pre_gate.push_back(std::move(pre_gate));
      cache->acts.push_back(std::move(acts));
    }
    if (i + 1 < params.layers) {
      const T* res = rs.data();
      T* hd = hidden.data();
      for (size_t j = 0; j < h * len; ++j) hd[j] += res[j];
      const T* sk = rs.data() + h * len;
      T* sd = skip.data();
      for (size_t j = 0; j < h * len; ++j) sd[j] += sk[j];
    } else {
      AddInPlace(skip, rs);
    }
  }
  const Tensor<T> out =
      numerics::PointwiseConvForward(skip, params.end_w.value, params.end_b.value);
  if (cache != nullptr) cache->skip = std::move(skip);
  const size_t c = static_cast<size_t>(params.out_channels);
  return {SliceRows(out, 0, c), SliceRows(out, c, 2 * c)};
}

template <typename T>
Tensor<T> WaveNetBackward(WaveNetParams<T>& params,
                          const WaveNetCache<T>& cache,
                          const Tensor<T>& grad_log_s,
                          const Tensor<T>& grad_shift) {
  const size_t h = static_cast<size_t>(params.hidden);
  const Tensor<T> grad_out = ConcatRows(grad_log_s, grad_shift);
  auto end = numerics::PointwiseConvBackward(grad_out, cache.skip,
                                             params.end_w.value);
  AddInPlace(params.end_w.grad, end.weight);
  AddInPlace(params.end_b.grad, end.bias);
  const Tensor<T>& grad_skip = end.input;

  // Gradient w.r.t. the residual stream h_{i+1}, walked backwards.
  Tensor<T> grad_hidden({h, cache.input.dim(1)});
  for (int i = params.layers - 1; i >= 0; --i) {
    const Tensor<T> grad_rs =
        i + 1 < params.layers ? ConcatRows(grad_hidden, grad_skip) : grad_skip;
    auto rs = numerics::PointwiseConvBackward(grad_rs, cache.acts[i],
                                              params.res_skip_w[i].value);
    AddInPlace(params.res_skip_w[i].grad, rs.weight);
    AddInPlace(params.res_skip_b[i].grad, rs.bias);
    auto gate = numerics::GatedActivationBackward(rs.input, cache.pre_tanh[i],
                                                  cache.pre_gate[i]);
    const Tensor<T> grad_pre = ConcatRows(gate.a, gate.b);
    auto cond = numerics::PointwiseConvBackward(
        grad_pre, cache.cond, params.cond_w[i].value, false);
    AddInPlace(params.cond_w[i].grad, cond.weight);
    AddInPlace(params.cond_b[i].grad, cond.bias);
    const int dilation = 1 << i;
    auto in = numerics::DilatedConv1dBackward(grad_pre, cache.hidden[i],
                                              params.in_w[i].value, dilation);
    AddInPlace(params.in_w[i].grad, in.weight);
    AddInPlace(params.in_b[i].grad, in.bias);
    // h_{i+1} = h_i + res(...) so the residual gradient passes straight
    // through; the last layer has no residual output.
    if (i + 1 < params.layers) {
      AddInPlace(grad_hidden, in.input);
    } else {
      grad_hidden = std::move(in.input);
    }
  }
  auto start = numerics::PointwiseConvBackward(grad_hidden, cache.input,
                                               params.start_w.value);
  AddInPlace(params.start_w.grad, start.weight);
  AddInPlace(params.start_b.grad, start.bias);
  return std::move(start.input);
}

template WaveNetOutput<float> WaveNetForward(const WaveNetParams<float>&,
                                             const Tensor<float>&,
                                             const Tensor<float>&,
                                             WaveNetCache<float>*);
template WaveNetOutput<double> WaveNetForward(const WaveNetParams<double>&,
                                              const Tensor<double>&,
                                              const Tensor<double>&,
                                              WaveNetCache<double>*);
template Tensor<float> WaveNetBackward(WaveNetParams<float>&,
                                       const WaveNetCache<float>&,
                                       const Tensor<float>&,
                                       const Tensor<float>&);
template Tensor<double> WaveNetBackward(WaveNetParams<double>&,
                                        const WaveNetCache<double>&,
                                        const Tensor<double>&,
                                        const Tensor<double>&);

}  // namespace flowvoc::flow
