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

#ifndef FLOWVOC_NUMERICS_OPS_H_
#define FLOWVOC_NUMERICS_OPS_H_

#include "flowvoc/numerics/tensor.h"

// Differentiable primitives used by the coupling networks. Every forward has
// an explicit backward that returns exact adjoints. Instantiated for float
// (training, inference) and double (gradient checks).
namespace flowvoc::numerics {

template <typename T>
struct LinearGrads {
  Tensor<T> input;
  Tensor<T> weight;
  Tensor<T> bias;
};

// input [C_in x T], weight [C_out x C_in x K] with K odd, bias [C_out] (or
// empty for none). Zero "same" padding: output[c, t] = bias[c] +
// sum_{i,k} weight[c, i, k] * input[i, t + (k - (K - 1) / 2) * dilation].
template <typename T>
Tensor<T> DilatedConv1dForward(const Tensor<T>& input, const Tensor<T>& weight,
                               const Tensor<T>& bias, int dilation);

// When need_input_grad is false the returned input gradient is empty.
template <typename T>
LinearGrads<T> DilatedConv1dBackward(const Tensor<T>& grad_out,
                                     const Tensor<T>& input,
                                     const Tensor<T>& weight, int dilation,
                                     bool need_input_grad = true);

// input [C_in x T], weight [C_out x C_in], bias [C_out] or empty.
template <typename T>
Tensor<T> PointwiseConvForward(const Tensor<T>& input, const Tensor<T>& weight,
                               const Tensor<T>& bias);

template <typename T>
LinearGrads<T> PointwiseConvBackward(const Tensor<T>& grad_out,
                                     const Tensor<T>& input,
                                     const Tensor<T>& weight,
                                     bool need_input_grad = true);

// tanh(a) * sigmoid(b), elementwise.
template <typename T>
Tensor<T> GatedActivationForward(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
struct GateGrads {
  Tensor<T> a;
  Tensor<T> b;
};

template <typename T>
GateGrads<T> GatedActivationBackward(const Tensor<T>& grad_out,
                                     const Tensor<T>& a, const Tensor<T>& b);

}  // namespace flowvoc::numerics

#endif  // FLOWVOC_NUMERICS_OPS_H_
