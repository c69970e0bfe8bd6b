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
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "ids/nn/parameters.hpp"

namespace ids::nn {

/// Thrown when a gradient contains NaN or Inf; the update is not applied.
class NonFiniteGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamMoments {
  Tensor first;
  Tensor second;
};

struct AdamState {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::map<std::string, AdamMoments> moments;
};

/// One bias-corrected Adam descent step over every parameter in `params`
/// using the gradients currently stored in them.
inline void adam_step(ParameterStore& params, AdamState& state) {
  for (const auto& p : params) {
    if (!p->grad.all_finite()) throw NonFiniteGradient("non-finite gradient in parameter '" + p->name + "'");
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (auto& p : params) {
    auto [it, inserted] = state.moments.try_emplace(p->name);
    AdamMoments& mom = it->second;
    if (inserted) {
      mom.first = Tensor(p->value.shape());
      mom.second = Tensor(p->value.shape());
    }
    IDS_REQUIRE(mom.first.shape() == p->value.shape(), "Adam moments for '", p->name, "' have shape ",
                shape_str(mom.first.shape()), ", parameter has ", shape_str(p->value.shape()));
    double* w = p->value.data();
    const double* g = p->grad.data();
    double* m = mom.first.data();
    double* v = mom.second.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace ids::nn
