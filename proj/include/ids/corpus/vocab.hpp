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
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "ids/corpus/types.hpp"

namespace ids::corpus {

/// Whitespace-token vocabulary with reserved PAD (0) and UNK (1). Other
/// tokens are ordered by descending frequency, ties lexicographic.
class Vocab {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocab() : tokens_{kPadToken, kUnkToken} { reindex(); }

  static Vocab from_counts(const std::map<std::string, std::size_t>& counts) {
    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocab v;
    for (const auto& [tok, n] : items)
      if (tok != kPadToken && tok != kUnkToken) v.tokens_.push_back(tok);
    v.reindex();
    return v;
  }

  static Vocab from_tokens(std::vector<std::string> tokens) {
    IDS_REQUIRE(tokens.size() >= 2 && tokens[0] == kPadToken && tokens[1] == kUnkToken,
                "vocab must start with reserved tokens");
    Vocab v;
    v.tokens_ = std::move(tokens);
    v.reindex();
    return v;
  }

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(std::size_t i) const { return tokens_.at(i); }

  std::size_t index(const std::string& tok) const {
    auto it = index_.find(tok);
    return it == index_.end() ? kUnk : it->second;
  }

  std::vector<std::size_t> encode(const std::string& text) const {
    std::vector<std::size_t> ids;
    for (const auto& tok : tokenize(text)) ids.push_back(index(tok));
    return ids;
  }

  nlohmann::json to_json() const { return tokens_; }
  static Vocab from_json(const nlohmann::json& j) { return from_tokens(j.get<std::vector<std::string>>()); }

  friend bool operator==(const Vocab& a, const Vocab& b) { return a.tokens_ == b.tokens_; }

 private:
  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < tokens_.size(); ++i) index_.emplace(tokens_[i], i);
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Builds a vocabulary over already-normalized dialogues.
inline Vocab build_vocab(const std::vector<Dialogue>& dialogues) {
  std::map<std::string, std::size_t> counts;
  for (const auto& d : dialogues)
    for (const auto& t : d.turns) {
      for (const auto& tok : tokenize(t.user)) ++counts[tok];
      for (const auto& tok : tokenize(t.system)) ++counts[tok];
    }
  return Vocab::from_counts(counts);
}

}  // namespace ids::corpus
