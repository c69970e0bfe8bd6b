// Copyright 2026 The IDS Authors. All Rights Reserved.
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

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ids {

/// Raised when a caller breaks an operation's precondition (shape mismatch,
/// empty input, unknown id, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream oss;
  (oss << ... << std::forward<Args>(args));
  return oss.str();
}

}  // namespace detail

#define IDS_REQUIRE(cond, ...)                                         \
  do {                                                                 \
    if (!(cond)) {                                                     \
      throw ::ids::ContractViolation(::ids::detail::concat(__VA_ARGS__)); \
    }                                                                  \
  } while (0)

namespace nn {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

inline std::string shape_str(const Shape& shape) {
  std::ostringstream oss;
  oss << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) oss << ", ";
    oss << shape[i];
  }
  oss << ')';
  return oss.str();
}

/// Dense row-major array of doubles. Rank 1 and 2 are all the models need,
/// but the shape is kept general for checkpointing.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(Shape shape, double fill = 0.0)
      : shape_(std::move(shape)), data_(shape_size(shape_), fill) {
    for (auto d : shape_) IDS_REQUIRE(d > 0, "tensor dimensions must be positive, got ", shape_str(shape_));
  }

  Tensor(Shape shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    for (auto d : shape_) IDS_REQUIRE(d > 0, "tensor dimensions must be positive, got ", shape_str(shape_));
    IDS_REQUIRE(data_.size() == shape_size(shape_), "value count ", data_.size(),
                " does not match shape ", shape_str(shape_));
  }

  static Tensor vector(std::vector<double> values) {
    const std::size_t n = values.size();
    return Tensor({n}, std::move(values));
  }

  static Tensor vector(std::initializer_list<double> values) {
    return vector(std::vector<double>(values));
  }

  static Tensor matrix(std::size_t rows, std::size_t cols, double fill = 0.0) {
    return Tensor({rows, cols}, fill);
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const {
    return shape_.size() < 2 ? 1 : data_.size() / shape_[0];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> span() { return data_; }
  std::span<const double> span() const { return data_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Plain (non-differentiable) kernels shared by the tape and inference paths.

inline void matvec(const Tensor& m, std::span<const double> x, std::span<double> out) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IDS_REQUIRE(x.size() == cols && out.size() == rows, "matvec: matrix ", shape_str(m.shape()),
              " vs vector ", x.size());
  const double* p = m.data();
  for (std::size_t r = 0; r < rows; ++r, p += cols) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += p[c] * x[c];
    out[r] = acc;
  }
}

inline void matvec_transposed(const Tensor& m, std::span<const double> x, std::span<double> out) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IDS_REQUIRE(x.size() == rows && out.size() == cols, "matvec_transposed: matrix ",
              shape_str(m.shape()), " vs vector ", x.size());
  std::fill(out.begin(), out.end(), 0.0);
  const double* p = m.data();
  for (std::size_t r = 0; r < rows; ++r, p += cols) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (std::size_t c = 0; c < cols; ++c) out[c] += p[c] * xr;
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  IDS_REQUIRE(a.size() == b.size(), "dot: length mismatch ", a.size(), " vs ", b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Numerically stable softmax (max subtraction).
inline std::vector<double> softmax(std::span<const double> logits) {
  IDS_REQUIRE(!logits.empty(), "softmax of an empty vector");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

inline std::vector<double> log_softmax(std::span<const double> logits) {
  IDS_REQUIRE(!logits.empty(), "log_softmax of an empty vector");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace nn
}  // namespace ids
