// Copyright 2026 The sitsmon authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "core/common.hpp"

namespace sitsmon {

// Dense row-major tensor. Rank is dynamic but the pipeline only uses
// rank 2..4 (HxW maps, CxHxW images, NxCxHxW batches).
template <typename T>
class TensorT {
 public:
  TensorT() = default;

  explicit TensorT(std::vector<int> shape) : shape_(std::move(shape)) {
    data_.assign(num_elements(shape_), T(0));
  }

  TensorT(std::initializer_list<int> shape)
      : TensorT(std::vector<int>(shape)) {}

  static std::size_t num_elements(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int d : shape) {
      if (d < 0) throw InvalidArgument("tensor: negative dimension");
      n *= static_cast<std::size_t>(d);
    }
    return n;
  }

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  // CxHxW access.
  T& at3(int c, int h, int w) {
    return data_[(static_cast<std::size_t>(c) * dim(1) + h) * dim(2) + w];
  }
  const T& at3(int c, int h, int w) const {
    return data_[(static_cast<std::size_t>(c) * dim(1) + h) * dim(2) + w];
  }

  // NxCxHxW access.
  T& at4(int n, int c, int h, int w) {
    return data_[((static_cast<std::size_t>(n) * dim(1) + c) * dim(2) + h) *
                     dim(3) +
                 w];
  }
  const T& at4(int n, int c, int h, int w) const {
    return data_[((static_cast<std::size_t>(n) * dim(1) + c) * dim(2) + h) *
                     dim(3) +
                 w];
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  bool same_shape(const TensorT& other) const { return shape_ == other.shape_; }

  template <typename U>
  TensorT<U> cast() const {
    TensorT<U> out(shape_);
    for (std::size_t i = 0; i < data_.size(); ++i)
      out[i] = static_cast<U>(data_[i]);
    return out;
  }

 private:
  std::vector<int> shape_;
  std::vector<T> data_;
};

using Tensor = TensorT<float>;

bool all_finite(const Tensor& t);

}  // namespace sitsmon
