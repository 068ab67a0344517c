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

#include "flowvoc/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace flowvoc::numerics {

namespace {

[[noreturn]] void ShapeError(const std::string& what) {
  throw Error(ErrorCode::kShapeMismatch, what);
}

template <typename T>
void CheckBias(const Tensor<T>& bias, size_t c_out, const char* op) {
  if (!bias.empty() && (bias.rank() != 1 || bias.dim(0) != c_out)) {
    ShapeError(std::string(op) + ": bias shape " + ShapeString(bias.shape()) +
               " for " + std::to_string(c_out) + " outputs");
  }
}

template <typename T>
void CheckConvShapes(const Tensor<T>& input, const Tensor<T>& weight,
                     int dilation) {
  RequireRank(input, 2, "DilatedConv1d input");
  RequireRank(weight, 3, "DilatedConv1d weight");
  if (weight.dim(1) != input.dim(0)) {
    ShapeError("DilatedConv1d: weight " + ShapeString(weight.shape()) +
               " vs input " + ShapeString(input.shape()));
  }
  if (weight.dim(2) % 2 == 0) ShapeError("DilatedConv1d: kernel must be odd");
  if (dilation < 1) ShapeError("DilatedConv1d: dilation must be >= 1");
}

// Valid output range [t0, t1) for a tap at `offset`.
inline void TapRange(long long offset, size_t len, size_t& t0, size_t& t1) {
  const long long n = static_cast<long long>(len);
  t0 = static_cast<size_t>(std::clamp(-offset, 0LL, n));
  t1 = static_cast<size_t>(std::clamp(n - offset, 0LL, n));
}

}  // namespace

template <typename T>
Tensor<T> DilatedConv1dForward(const Tensor<T>& input, const Tensor<T>& weight,
                               const Tensor<T>& bias, int dilation) {
  CheckConvShapes(input, weight, dilation);
  const size_t c_out = weight.dim(0);
  const size_t c_in = weight.dim(1);
  const size_t kernel = weight.dim(2);
  const size_t len = input.dim(1);
  CheckBias(bias, c_out, "DilatedConv1d");
  const long long half = static_cast<long long>(kernel - 1) / 2;

  Tensor<T> out({c_out, len});
  for (size_t co = 0; co < c_out; ++co) {
    T* dst = out.row(co);
    if (!bias.empty()) std::fill(dst, dst + len, bias[co]);
    for (size_t ci = 0; ci < c_in; ++ci) {
      const T* src = input.row(ci);
      for (size_t k = 0; k < kernel; ++k) {
        const T w = weight.at(co, ci, k);
        const long long offset =
            (static_cast<long long>(k) - half) * dilation;
        size_t t0, t1;
        TapRange(offset, len, t0, t1);
        if (t1 <= t0) continue;
        const T* s = src + (static_cast<long long>(t0) + offset);
        T* d = dst + t0;
        for (size_t i = 0; i < t1 - t0; ++i) d[i] += w * s[i];
      }
    }
  }
  return out;
}

template <typename T>
LinearGrads<T> DilatedConv1dBackward(const Tensor<T>& grad_out,
                                     const Tensor<T>& input,
                                     const Tensor<T>& weight, int dilation,
                                     bool need_input_grad) {
  CheckConvShapes(input, weight, dilation);
  const size_t c_out = weight.dim(0);
  const size_t c_in = weight.dim(1);
  const size_t kernel = weight.dim(2);
  const size_t len = input.dim(1);
  if (grad_out.rank() != 2 || grad_out.dim(0) != c_out ||
      grad_out.dim(1) != len) {
    ShapeError("DilatedConv1dBackward: grad_out " +
               ShapeString(grad_out.shape()));
  }
  const long long half = static_cast<long long>(kernel - 1) / 2;

  LinearGrads<T> grads;
  grads.weight = Tensor<T>(weight.shape());
  grads.bias = Tensor<T>({c_out});
  if (need_input_grad) grads.input = Tensor<T>(input.shape());

  for (size_t co = 0; co < c_out; ++co) {
    const T* g = grad_out.row(co);
    T bias_acc = 0;
    for (size_t t = 0; t < len; ++t) bias_acc += g[t];
    grads.bias[co] = bias_acc;
    for (size_t ci = 0; ci < c_in; ++ci) {
      const T* src = input.row(ci);
      T* dsrc = need_input_grad ? grads.input.row(ci) : nullptr;
      for (size_t k = 0; k < kernel; ++k) {
        const long long offset =
            (static_cast<long long>(k) - half) * dilation;
        size_t t0, t1;
        TapRange(offset, len, t0, t1);
        if (t1 <= t0) continue;
        const long long first = static_cast<long long>(t0) + offset;
        const T* s = src + first;
        const T* gg = g + t0;
        T acc = 0;
        for (size_t i = 0; i < t1 - t0; ++i) acc += gg[i] * s[i];
        grads.weight.at(co, ci, k) = acc;
        if (dsrc != nullptr) {
          const T w = weight.at(co, ci, k);
          T* ds = dsrc + first;
          for (size_t i = 0; i < t1 - t0; ++i) ds[i] += w * gg[i];
        }
      }
    }
  }
  return grads;
}

template <typename T>
Tensor<T> PointwiseConvForward(const Tensor<T>& input, const Tensor<T>& weight,
                               const Tensor<T>& bias) {
  RequireRank(input, 2, "PointwiseConv input");
  RequireRank(weight, 2, "PointwiseConv weight");
  if (weight.dim(1) != input.dim(0)) {
    ShapeError("PointwiseConv: weight " + ShapeString(weight.shape()) +
               " vs input " + ShapeString(input.shape()));
  }
  const size_t c_out = weight.dim(0);
  const size_t c_in = weight.dim(1);
  const size_t len = input.dim(1);
  CheckBias(bias, c_out, "PointwiseConv");

  Tensor<T> out({c_out, len});
  for (size_t co = 0; co < c_out; ++co) {
    T* dst = out.row(co);
    if (!bias.empty()) std::fill(dst, dst + len, bias[co]);
    for (size_t ci = 0; ci < c_in; ++ci) {
      const T w = weight.at(co, ci);
      const T* src = input.row(ci);
      for (size_t t = 0; t < len; ++t) dst[t] += w * src[t];
    }
  }
  return out;
}

template <typename T>
LinearGrads<T> PointwiseConvBackward(const Tensor<T>& grad_out,
                                     const Tensor<T>& input,
                                     const Tensor<T>& weight,
                                     bool need_input_grad) {
  RequireRank(input, 2, "PointwiseConvBackward input");
  RequireRank(weight, 2, "PointwiseConvBackward weight");
  const size_t c_out = weight.dim(0);
  const size_t c_in = weight.dim(1);
  const size_t len = input.dim(1);
  if (c_in != input.dim(0) || grad_out.rank() != 2 ||
      grad_out.dim(0) != c_out || grad_out.dim(1) != len) {
    ShapeError("PointwiseConvBackward: inconsistent shapes");
  }
  LinearGrads<T> grads;
  grads.weight = Tensor<T>(weight.shape());
  grads.bias = Tensor<T>({c_out});
  if (need_input_grad) grads.input = Tensor<T>(input.shape());

  for (size_t co = 0; co < c_out; ++co) {
    const T* g = grad_out.row(co);
    T bias_acc = 0;
    for (size_t t = 0; t < len; ++t) bias_acc += g[t];
    grads.bias[co] = bias_acc;
    for (size_t ci = 0; ci < c_in; ++ci) {
      const T* src = input.row(ci);
      T acc = 0;
      for (size_t t = 0; t < len; ++t) acc += g[t] * src[t];
      grads.weight.at(co, ci) = acc;
      if (need_input_grad) {
        const T w = weight.at(co, ci);
        T* dsrc = grads.input.row(ci);
        for (size_t t = 0; t < len; ++t) dsrc[t] += w * g[t];
      }
    }
  }
  return grads;
}

template <typename T>
Tensor<T> GatedActivationForward(const Tensor<T>& a, const Tensor<T>& b) {
  if (!a.SameShape(b)) {
    ShapeError("GatedActivation: " + ShapeString(a.shape()) + " vs " +
               ShapeString(b.shape()));
  }
  Tensor<T> out(a.shape());
  for (size_t i = 0; i < a.size(); ++i) {
    out[i] = std::tanh(a[i]) / (T{1} + std::exp(-b[i]));
  }
  return out;
}

template <typename T>
GateGrads<T> GatedActivationBackward(const Tensor<T>& grad_out,
                                     const Tensor<T>& a, const Tensor<T>& b) {
  if (!a.SameShape(b) || !a.SameShape(grad_out)) {
    ShapeError("GatedActivationBackward: shape mismatch");
  }
  GateGrads<T> grads{Tensor<T>(a.shape()), Tensor<T>(a.shape())};
  for (size_t i = 0; i < a.size(); ++i) {
    const T th = std::tanh(a[i]);
    const T sg = T{1} / (T{1} + std::exp(-b[i]));
    grads.a[i] = grad_out[i] * (T{1} - th * th) * sg;
    grads.b[i] = grad_out[i] * th * sg * (T{1} - sg);
  }
  return grads;
}

#define FLOWVOC_INSTANTIATE_OPS(T)                                          \
  template Tensor<T> DilatedConv1dForward(const Tensor<T>&,                 \
                                          const Tensor<T>&,                 \
                                          const Tensor<T>&, int);           \
  template LinearGrads<T> DilatedConv1dBackward(                            \
      const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, int, bool);     \
  template Tensor<T> PointwiseConvForward(const Tensor<T>&,                 \
                                          const Tensor<T>&,                 \
                                          const Tensor<T>&);                \
  template LinearGrads<T> PointwiseConvBackward(                            \
      const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, bool);          \
  template Tensor<T> GatedActivationForward(const Tensor<T>&,               \
                                            const Tensor<T>&);              \
  template GateGrads<T> GatedActivationBackward(                            \
      const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);

FLOWVOC_INSTANTIATE_OPS(float)
FLOWVOC_INSTANTIATE_OPS(double)

#undef FLOWVOC_INSTANTIATE_OPS

}  // namespace flowvoc::numerics
