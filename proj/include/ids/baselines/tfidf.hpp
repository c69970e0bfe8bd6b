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

// tf-idf retrieval. Each inventory response is one document made of every
// training context that led to it plus the response itself; a query is the
// bag of context tokens.

#include <cmath>
#include <map>
#include <vector>

#include <json.hpp>

#include "ids/baselines/data.hpp"

namespace ids::baselines {

using SparseVector = std::map<std::size_t, double>;

inline double sparse_dot(const SparseVector& a, const SparseVector& b) {
  const SparseVector& small = a.size() <= b.size() ? a : b;
  const SparseVector& large = a.size() <= b.size() ? b : a;
  double acc = 0.0;
  for (const auto& [k, v] : small) {
    auto it = large.find(k);
    if (it != large.end()) acc += v * it->second;
  }
  return acc;
}

inline double sparse_norm(const SparseVector& a) { return std::sqrt(sparse_dot(a, a)); }

/// Cosine similarity; 0 when either side is the zero vector.
inline double cosine(const SparseVector& a, const SparseVector& b) {
  const double n = sparse_norm(a) * sparse_norm(b);
  return n == 0.0 ? 0.0 : sparse_dot(a, b) / n;
}

class TfIdfIndex {
 public:
  static TfIdfIndex fit(const std::vector<Example>& train, const EncodedInventory& inventory) {
    const std::size_t n = inventory.responses.size();
    IDS_REQUIRE(n > 0, "tf-idf index over an empty inventory");
    std::vector<std::map<std::size_t, double>> tf(n);
    for (std::size_t r = 0; r < n; ++r)
      for (auto w : inventory.responses[r]) tf[r][w] += 1.0;
    for (const auto& ex : train) {
      if (ex.target == kNoTarget) continue;
      for (const auto& u : ex.utterances)
        for (auto w : u) tf[ex.target][w] += 1.0;
    }
    TfIdfIndex idx;
    std::map<std::size_t, double> df;
    for (const auto& doc : tf)
      for (const auto& [w, c] : doc) df[w] += 1.0;
    const double d = static_cast<double>(n);
    for (const auto& [w, f] : df) idx.idf_[w] = std::log((1.0 + d) / (1.0 + f)) + 1.0;
    for (auto& doc : tf) idx.docs_.push_back(idx.normalized(std::move(doc)));
    return idx;
  }

  std::size_t size() const { return docs_.size(); }

  double idf(std::size_t token) const {
    auto it = idf_.find(token);
    return it == idf_.end() ? 0.0 : it->second;
  }

  SparseVector query(const Example& ex) const {
    SparseVector q;
    for (const auto& u : ex.utterances)
      for (auto w : u) q[w] += 1.0;
    return normalized(std::move(q));
  }

  /// Cosine similarity of the context to every response document.
  std::vector<double> scores(const Example& ex) const {
    const SparseVector q = query(ex);
    std::vector<double> s(docs_.size());
    for (std::size_t r = 0; r < docs_.size(); ++r) s[r] = sparse_dot(q, docs_[r]);
    return s;
  }

  nlohmann::json to_json() const {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : docs_) docs.push_back(d);
    return {{"idf", idf_}, {"docs", docs}};
  }

  static TfIdfIndex from_json(const nlohmann::json& j) {
    TfIdfIndex idx;
    idx.idf_ = j.at("idf").get<std::map<std::size_t, double>>();
    for (const auto& d : j.at("docs")) idx.docs_.push_back(d.get<SparseVector>());
    return idx;
  }

 private:
  SparseVector normalized(std::map<std::size_t, double> tf) const {
    SparseVector v;
    for (const auto& [w, c] : tf) {
      const double weight = c * idf(w);
      if (weight != 0.0) v[w] = weight;
    }
    const double n = sparse_norm(v);
    if (n > 0.0)
      for (auto& [w, x] : v) x /= n;
    return v;
  }

  std::map<std::size_t, double> idf_;
  std::vector<SparseVector> docs_;
};

}  // namespace ids::baselines
