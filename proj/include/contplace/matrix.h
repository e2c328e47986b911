// Copyright 2026 The Contplace Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace contplace {

/// Raised when two containers that must agree on shape do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix. Rows index applications, columns index machines
/// everywhere in this library.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T &operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  T &at(std::size_t r, std::size_t c) {
    CheckIndex(r, c);
    return data_[r * cols_ + c];
  }
  const T &at(std::size_t r, std::size_t c) const {
    CheckIndex(r, c);
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<T> &data() const { return data_; }

  bool SameShape(std::size_t rows, std::size_t cols) const {
    return rows_ == rows && cols_ == cols;
  }
  template <typename U>
  bool SameShape(const Matrix<U> &other) const {
    return SameShape(other.rows(), other.cols());
  }

  friend bool operator==(const Matrix &, const Matrix &) = default;

 private:
  void CheckIndex(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw std::out_of_range("matrix index (" + std::to_string(r) + ", " +
                              std::to_string(c) + ") outside " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using BinaryMatrix = Matrix<std::uint8_t>;

}  // namespace contplace
