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

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ids/corpus/types.hpp"
#include "ids/corpus/vocab.hpp"
#include "ids/nn/tensor.hpp"

namespace ids::baselines {

inline constexpr std::size_t kNoTarget = std::numeric_limits<std::size_t>::max();

/// Fixed response inventory, ids in order of first appearance.
class Inventory {
 public:
  Inventory() = default;
  explicit Inventory(const std::vector<std::string>& texts) {
    for (const auto& t : texts) add(t);
  }

  std::size_t add(const std::string& text) {
    auto [it, inserted] = index_.emplace(text, texts_.size());
    if (inserted) texts_.push_back(text);
    return it->second;
  }

  std::size_t find(const std::string& text) const {
    auto it = index_.find(text);
    return it == index_.end() ? kNoTarget : it->second;
  }

  std::size_t size() const { return texts_.size(); }
  const std::string& text(std::size_t id) const { return texts_.at(id); }
  const std::vector<std::string>& texts() const { return texts_; }

  /// Every distinct system response of already-normalized dialogues.
  static Inventory from_dialogues(const std::vector<corpus::Dialogue>& dialogues) {
    Inventory inv;
    for (const auto& d : dialogues)
      for (const auto& t : d.turns) inv.add(t.system);
    return inv;
  }

 private:
  std::vector<std::string> texts_;
  std::map<std::string, std::size_t> index_;
};

/// One turn: the context so far (ending with the user utterance) and the
/// inventory id of the gold response, or kNoTarget if it is outside the
/// inventory.
struct Example {
  std::vector<std::vector<std::size_t>> utterances;
  std::size_t target = kNoTarget;
};

struct EncodedInventory {
  std::vector<std::vector<std::size_t>> responses;
};

inline std::vector<std::size_t> encode_nonempty(const corpus::Vocab& vocab, const std::string& text) {
  auto ids = vocab.encode(text);
  IDS_REQUIRE(!ids.empty(), "utterance has no tokens: '", text, "'");
  return ids;
}

inline std::vector<Example> make_examples(const std::vector<corpus::Dialogue>& normalized, const Inventory& inventory,
                                          const corpus::Vocab& vocab) {
  std::vector<Example> out;
  for (const auto& d : normalized) {
    std::vector<std::vector<std::size_t>> ctx;
    for (const auto& t : d.turns) {
      ctx.push_back(encode_nonempty(vocab, t.user));
      out.push_back({ctx, inventory.find(t.system)});
      ctx.push_back(encode_nonempty(vocab, t.system));
    }
  }
  return out;
}

inline EncodedInventory encode_inventory(const Inventory& inventory, const corpus::Vocab& vocab) {
  EncodedInventory e;
  for (const auto& t : inventory.texts()) e.responses.push_back(encode_nonempty(vocab, t));
  return e;
}

}  // namespace ids::baselines
