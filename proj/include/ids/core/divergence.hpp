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

// Dispersion of the K sampled candidate distributions. The "JSD" used by
// the gate is the symmetrized KL divergence against the sample average,
// not the midpoint-mixture Jensen-Shannon divergence.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ids/nn/tensor.hpp"

namespace ids::core {

inline constexpr double kLogFloor = 1e-12;

/// KL(p || q) in nats with an additive floor inside both logarithms.
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  IDS_REQUIRE(p.size() == q.size(), "kl_divergence: length mismatch ", p.size(), " vs ", q.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * (std::log(p[i] + kLogFloor) - std::log(q[i] + kLogFloor));
  return acc;
}

/// ½ (KL(p || q) + KL(q || p)).
inline double symmetric_kl(std::span<const double> p, std::span<const double> q) {
  IDS_REQUIRE(p.size() == q.size(), "symmetric_kl: length mismatch ", p.size(), " vs ", q.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    acc += (p[i] - q[i]) * (std::log(p[i] + kLogFloor) - std::log(q[i] + kLogFloor));
  return 0.5 * acc;
}

inline std::vector<double> average_distribution(const std::vector<std::vector<double>>& samples) {
  IDS_REQUIRE(!samples.empty(), "average of zero distributions");
  std::vector<double> avg(samples.front().size(), 0.0);
  for (const auto& s : samples) {
    IDS_REQUIRE(s.size() == avg.size(), "ragged sample distributions");
    for (std::size_t i = 0; i < s.size(); ++i) avg[i] += s[i];
  }
  const double k = static_cast<double>(samples.size());
  for (double& a : avg) a /= k;
  return avg;
}

/// Mean symmetrized KL between each sample and `avg`. Exactly zero when all
/// samples are identical, even if rounding moved `avg` off them by an ulp.
inline double jsd_avg(const std::vector<std::vector<double>>& samples, std::span<const double> avg) {
  IDS_REQUIRE(!samples.empty(), "jsd_avg of zero distributions");
  if (std::all_of(samples.begin(), samples.end(), [&](const auto& s) { return s == samples.front(); })) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) acc += symmetric_kl(s, avg);
  return acc / static_cast<double>(samples.size());
}

/// Refuse iff the samples disagree (JSD_avg > tau1) or the averaged
/// distribution is not peaked enough (max P_avg < tau2).
inline bool should_refuse(double jsd, double max_p, double tau1, double tau2) { return jsd > tau1 || max_p < tau2; }

}  // namespace ids::core
