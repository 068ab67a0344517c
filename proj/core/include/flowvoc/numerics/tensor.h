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

#ifndef FLOWVOC_NUMERICS_TENSOR_H_
#define FLOWVOC_NUMERICS_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flowvoc/error.h"

namespace flowvoc::numerics {

inline std::string ShapeString(const std::vector<size_t>& shape);

// Dense row-major array. Copyable value type; no views or aliasing.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, T fill = T{})
      : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}
  Tensor(std::vector<size_t> shape, std::vector<T> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != NumElements(shape_)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "data length " + std::to_string(data_.size()) +
                      " does not match shape " + ShapeString(shape_));
    }
  }

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_.at(i); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  // Rank-2 access.
  T& at(size_t r, size_t c) { return data_[r * shape_[1] + c]; }
  const T& at(size_t r, size_t c) const { return data_[r * shape_[1] + c]; }
  T* row(size_t r) { return data_.data() + r * shape_[1]; }
  const T* row(size_t r) const { return data_.data() + r * shape_[1]; }

  // Rank-3 access.
  T& at(size_t i, size_t j, size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  const T& at(size_t i, size_t j, size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  void Fill(T value) { std::fill(data_.begin(), data_.end(), value); }
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

  template <typename U>
  Tensor<U> Cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return Tensor<U>(shape_, std::move(out));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

  static size_t NumElements(const std::vector<size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), size_t{1},
                           std::multiplies<>());
  }

 private:
  std::vector<size_t> shape_;
  std::vector<T> data_;
};

// Learnable tensor with a same-shape gradient accumulator. Gradients are
// added into `grad`; ZeroGrad resets them.
template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;

  Parameter() = default;
  Parameter(std::string n, Tensor<T> v)
      : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}

  void ZeroGrad() { grad.Fill(T{}); }
};

template <typename T>
void RequireRank(const Tensor<T>& t, size_t rank, const char* what) {
  if (t.rank() != rank) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": expected rank " + std::to_string(rank) +
                    ", got shape " + ShapeString(t.shape()));
  }
}

// Rows [begin, end) of a rank-2 tensor.
template <typename T>
Tensor<T> SliceRows(const Tensor<T>& t, size_t begin, size_t end) {
  RequireRank(t, 2, "SliceRows");
  const size_t cols = t.dim(1);
  std::vector<T> data(t.data() + begin * cols, t.data() + end * cols);
  return Tensor<T>({end - begin, cols}, std::move(data));
}

// Stacks rank-2 tensors with equal column counts along rows.
template <typename T>
Tensor<T> ConcatRows(const Tensor<T>& top, const Tensor<T>& bottom) {
  RequireRank(top, 2, "ConcatRows");
  RequireRank(bottom, 2, "ConcatRows");
  if (top.dim(1) != bottom.dim(1)) {
    throw Error(ErrorCode::kShapeMismatch, "ConcatRows: column mismatch");
  }
  std::vector<T> data(top.values().begin(), top.values().end());
  data.insert(data.end(), bottom.values().begin(), bottom.values().end());
  return Tensor<T>({top.dim(0) + bottom.dim(0), top.dim(1)}, std::move(data));
}

template <typename T>
void AddInPlace(Tensor<T>& dst, const Tensor<T>& src) {
  if (!dst.SameShape(src)) {
    throw Error(ErrorCode::kShapeMismatch,
                "AddInPlace: " + ShapeString(dst.shape()) + " vs " +
                    ShapeString(src.shape()));
  }
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

inline std::string ShapeString(const std::vector<size_t>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

}  // namespace flowvoc::numerics

#endif  // FLOWVOC_NUMERICS_TENSOR_H_
