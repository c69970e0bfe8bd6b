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
#include <string>
#include <vector>

#include "ids/corpus/catalog.hpp"
#include "ids/corpus/types.hpp"

namespace ids::corpus {

inline std::string entity_order_token(std::size_t k) { return "$entity_order_" + std::to_string(k) + "$"; }

/// 1-based k of "$entity_order_k$", or 0 for any other token.
inline std::size_t entity_order_index(const std::string& tok) {
  if (!is_entity_order_token(tok)) return 0;
  return static_cast<std::size_t>(std::stoul(tok.substr(14, tok.size() - 15)));
}

/// Replaces the k-th distinct entity token (first appearance, user before
/// system within a turn) with $entity_order_k$. The returned `entities`
/// table maps k-1 back to the surface token, so an already-normalized
/// dialogue normalizes to itself.
inline Dialogue normalize_entities(const Dialogue& d) {
  Dialogue out = d;
  out.entities.clear();
  std::map<std::string, std::string> mapping;
  auto rewrite = [&](const std::string& text) {
    auto tokens = tokenize(text);
    for (auto& tok : tokens) {
      if (!is_entity_token(tok)) continue;
      auto it = mapping.find(tok);
      if (it == mapping.end()) {
        std::string surface = tok;
        if (std::size_t k = entity_order_index(tok); k >= 1 && k <= d.entities.size()) surface = d.entities[k - 1];
        out.entities.push_back(surface);
        it = mapping.emplace(tok, entity_order_token(out.entities.size())).first;
      }
      tok = it->second;
    }
    return join(tokens);
  };
  for (auto& t : out.turns) {
    t.user = rewrite(t.user);
    t.system = rewrite(t.system);
  }
  return out;
}

/// Maps entity-order tokens back through a per-episode table.
inline std::string denormalize(const std::string& text, const std::vector<std::string>& table) {
  auto tokens = tokenize(text);
  for (auto& tok : tokens)
    if (std::size_t k = entity_order_index(tok); k >= 1 && k <= table.size()) tok = table[k - 1];
  return join(tokens);
}

inline Dialogue denormalize(const Dialogue& d) {
  Dialogue out = d;
  for (auto& t : out.turns) {
    t.user = denormalize(t.user, d.entities);
    t.system = denormalize(t.system, d.entities);
  }
  return out;
}

}  // namespace ids::corpus
