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

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ids/nn/rng.hpp"
#include "ids/nn/tensor.hpp"

namespace ids::nn {

/// Default scale for uniform weight initialization.
inline constexpr double kInitScale = 0.08;

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
};

/// Owns every trainable tensor of a model. Addresses are stable for the
/// lifetime of the store; iteration follows registration order.
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;
  ParameterStore(ParameterStore&&) = default;
  ParameterStore& operator=(ParameterStore&&) = default;

  Parameter& add(const std::string& name, Tensor value) {
    IDS_REQUIRE(!index_.contains(name), "duplicate parameter name '", name, "'");
    index_[name] = params_.size();
    params_.push_back(std::make_unique<Parameter>(name, std::move(value)));
    return *params_.back();
  }

  Parameter& add_uniform(const std::string& name, Shape shape, Rng& rng, double scale = kInitScale) {
    Tensor t(std::move(shape));
    for (auto& v : t.values()) v = rng.uniform(-scale, scale);
    return add(name, std::move(t));
  }

  Parameter& add_zeros(const std::string& name, Shape shape) { return add(name, Tensor(std::move(shape))); }

  bool contains(const std::string& name) const { return index_.contains(name); }

  Parameter& get(const std::string& name) {
    auto it = index_.find(name);
    IDS_REQUIRE(it != index_.end(), "unknown parameter '", name, "'");
    return *params_[it->second];
  }
  const Parameter& get(const std::string& name) const {
    auto it = index_.find(name);
    IDS_REQUIRE(it != index_.end(), "unknown parameter '", name, "'");
    return *params_[it->second];
  }

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad() {
    for (auto& p : params_) p->grad.fill(0.0);
  }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p->value.size();
    return n;
  }

  /// Copies values from another store with identical layout.
  void copy_values_from(const ParameterStore& other) {
    IDS_REQUIRE(other.size() == size(), "parameter layout mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
      IDS_REQUIRE(other[i].name == params_[i]->name && other[i].value.shape() == params_[i]->value.shape(),
                  "parameter layout mismatch at '", params_[i]->name, "'");
      params_[i]->value = other[i].value;
    }
  }

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace ids::nn
