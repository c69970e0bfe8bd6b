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

// Central finite-difference oracle for tape gradients. Test-only.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ids/nn/parameters.hpp"
#include "ids/nn/tape.hpp"

namespace ids::check {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;
  std::size_t checked = 0;
};

/// Relative error with a small absolute floor on the denominator so that
/// entries whose true gradient is ~0 are judged on absolute error.
inline double rel_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Compares the tape gradient of `loss` against central differences for
/// every parameter in `store`. At most `max_per_param` entries are probed per
/// tensor (spread evenly) to bound runtime on large tables.
inline GradCheckResult check_gradients(nn::ParameterStore& store,
                                       const std::function<nn::Var(nn::Tape&)>& loss,
                                       double step = 1e-5, std::size_t max_per_param = 64,
                                       const std::vector<std::string>& only = {}, double floor = 1e-6) {
  store.zero_grad();
  {
    nn::Tape tape;
    nn::Var l = loss(tape);
    tape.backward(l);
  }
  auto eval = [&] {
    nn::Tape tape;
    return tape.scalar(loss(tape));
  };
  GradCheckResult result;
  for (auto& p : store) {
    if (!only.empty() && std::find(only.begin(), only.end(), p->name) == only.end()) continue;
    const std::size_t n = p->value.size();
    const std::size_t stride = std::max<std::size_t>(1, n / max_per_param);
    for (std::size_t i = 0; i < n; i += stride) {
      const double orig = p->value[i];
      p->value[i] = orig + step;
      const double up = eval();
      p->value[i] = orig - step;
      const double down = eval();
      p->value[i] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double err = rel_error(p->grad[i], numeric, floor);
      ++result.checked;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst = p->name + "[" + std::to_string(i) + "] analytic=" + std::to_string(p->grad[i]) +
                       " numeric=" + std::to_string(numeric);
      }
    }
  }
  return result;
}

}  // namespace ids::check
