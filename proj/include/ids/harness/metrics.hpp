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

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/nn/tensor.hpp"

namespace ids::harness {

struct MetricsRow {
  std::string model;
  int train_tier = 0;
  int test_tier = 0;
  std::size_t answered = 0;
  std::size_t refused = 0;
  std::size_t correct = 0;

  std::size_t turns() const { return answered + refused; }
  /// Over answered turns only.
  double accuracy() const { return answered ? static_cast<double>(correct) / static_cast<double>(answered) : 0.0; }
  double rejection_rate() const { return turns() ? static_cast<double>(refused) / static_cast<double>(turns()) : 0.0; }
};

inline nlohmann::json to_json(const MetricsRow& r) {
  return {{"model", r.model},       {"train_tier", r.train_tier}, {"test_tier", r.test_tier},
          {"accuracy", r.accuracy()}, {"rejection_rate", r.rejection_rate()}, {"answered", r.answered},
          {"refused", r.refused},   {"correct", r.correct}};
}

struct InterventionCurve {
  std::size_t window = 100;
  std::vector<double> fractions;  // escalation fraction per full window

  /// Trailing turns that do not fill a window are dropped.
  static InterventionCurve from_flags(const std::vector<bool>& escalated, std::size_t window) {
    IDS_REQUIRE(window > 0, "window must be positive");
    InterventionCurve c;
    c.window = window;
    for (std::size_t start = 0; start + window <= escalated.size(); start += window) {
      const auto n = std::count(escalated.begin() + static_cast<std::ptrdiff_t>(start),
                                escalated.begin() + static_cast<std::ptrdiff_t>(start + window), true);
      c.fractions.push_back(static_cast<double>(n) / static_cast<double>(window));
    }
    return c;
  }

  /// Mean over the first (or last) tenth of windows, at least one window.
  double head_mean() const { return span_mean(true); }
  double tail_mean() const { return span_mean(false); }

 private:
  double span_mean(bool head) const {
    IDS_REQUIRE(!fractions.empty(), "curve has no complete window");
    const std::size_t k = std::max<std::size_t>(1, fractions.size() / 10);
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += head ? fractions[i] : fractions[fractions.size() - 1 - i];
    return s / static_cast<double>(k);
  }
};

inline void write_csv(std::ostream& os, const std::vector<MetricsRow>& rows) {
  os << "model,train_tier,test_tier,accuracy,rejection_rate,answered,refused,correct\n";
  char buf[64];
  for (const auto& r : rows) {
    os << r.model << ',' << r.train_tier << ',' << r.test_tier << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.accuracy(), r.rejection_rate());
    os << buf << ',' << r.answered << ',' << r.refused << ',' << r.correct << '\n';
  }
}

inline void write_csv(std::ostream& os, const InterventionCurve& c) {
  os << "window,escalation_fraction\n";
  char buf[32];
  for (std::size_t i = 0; i < c.fractions.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.4f", c.fractions[i]);
    os << i << ',' << buf << '\n';
  }
}

/// Fixed-width text table, percentages to one decimal.
inline std::string render_table(const std::vector<MetricsRow>& rows) {
  std::string out = "model     train  test  accuracy  rejection  answered  refused\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-8s  SubD%d  SubD%d  %7.1f%%  %8.1f%%  %8zu  %7zu\n", r.model.c_str(),
                  r.train_tier, r.test_tier, 100.0 * r.accuracy(), 100.0 * r.rejection_rate(), r.answered,
                  r.refused);
    out += buf;
  }
  return out;
}

}  // namespace ids::harness
