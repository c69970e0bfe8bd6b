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

// Live-text normalization. Corpus utterances arrive pre-annotated; live
// text does not, so products are found by dictionary match and numbers by
// pattern rules, then products are rewritten to entity-order tokens with a
// per-session table.

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "ids/corpus/catalog.hpp"
#include "ids/corpus/normalize.hpp"
#include "ids/corpus/types.hpp"

namespace ids::service {

/// Lowercases and splits punctuation off words, matching the corpus style
/// ("does it work ?"). Placeholder tokens like $entity_3$ stay whole.
inline std::vector<std::string> tokenize_live(const std::string& text) {
  std::string spaced;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      spaced += ' ';
    } else if (c == '?' || c == '!' || c == ',' || c == ';' || c == '.' || c == ':') {
      spaced += ' ';
      spaced += ch;
      spaced += ' ';
    } else {
      spaced += static_cast<char>(std::tolower(c));
    }
  }
  // Decimal points and times survive the split above as "1 . 5"; rejoin.
  static const std::regex split_number(R"((\d) ([.:]) (\d))");
  for (std::string prev; prev != spaced;) {
    prev = spaced;
    spaced = std::regex_replace(spaced, split_number, "$1$2$3");
  }
  return corpus::tokenize(spaced);
}

/// Dictionary of product surface forms (one or more tokens) to catalog ids.
class EntityDictionary {
 public:
  EntityDictionary() = default;

  /// Every catalog id matches itself.
  explicit EntityDictionary(const corpus::Catalog& catalog) {
    for (const auto& p : catalog.products()) add(p.id, p.id);
  }

  void add(const std::string& surface, const std::string& entity) {
    auto tokens = tokenize_live(surface);
    IDS_REQUIRE(!tokens.empty(), "empty entity alias");
    longest_ = std::max(longest_, tokens.size());
    phrases_[corpus::join(tokens)] = entity;
  }

  std::size_t size() const { return phrases_.size(); }

  /// Longest match of tokens[i..] or 0; sets `entity`.
  std::size_t match(const std::vector<std::string>& tokens, std::size_t i, std::string& entity) const {
    for (std::size_t n = std::min(longest_, tokens.size() - i); n >= 1; --n) {
      std::vector<std::string> span(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
      if (auto it = phrases_.find(corpus::join(span)); it != phrases_.end()) {
        entity = it->second;
        return n;
      }
    }
    return 0;
  }

 private:
  std::map<std::string, std::string> phrases_;
  std::size_t longest_ = 0;
};

/// Slot placeholders recognized by pattern. Phone numbers are 11-digit
/// mobile numbers; any other run of 6 or more digits is an order number.
inline std::string pattern_slot(const std::string& token) {
  static const std::regex phone(R"(1\d{10})");
  static const std::regex dashed_phone(R"(\d{3}-\d{4}-\d{4})");
  static const std::regex order(R"([a-z]{0,3}-?\d{6,})");
  if (std::regex_match(token, phone) || std::regex_match(token, dashed_phone)) return "$phone$";
  if (std::regex_match(token, order)) return "$orderNumber$";
  return "";
}

/// Per-session state: product surface forms in first-appearance order and
/// the latest surface value of each slot placeholder.
class EntityTable {
 public:
  const std::vector<std::string>& surfaces() const { return surfaces_; }
  const std::map<std::string, std::string>& slots() const { return slots_; }

  /// Normalized text of a live utterance. Products become entity-order
  /// tokens, numbers become slot placeholders.
  std::string normalize(const std::string& text, const EntityDictionary& dict) {
    const auto tokens = tokenize_live(text);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens.size();) {
      std::string entity;
      if (std::size_t n = dict.match(tokens, i, entity)) {
        std::vector<std::string> span(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
        out.push_back(order_token(entity, corpus::join(span)));
        i += n;
        continue;
      }
      if (corpus::is_entity_order_token(tokens[i])) {
        out.push_back(tokens[i]);  // already normalized
      } else if (auto slot = pattern_slot(tokens[i]); !slot.empty()) {
        slots_[slot] = tokens[i];
        out.push_back(slot);
      } else {
        out.push_back(tokens[i]);
      }
      ++i;
    }
    return corpus::join(out);
  }

  /// Surface text of a normalized response.
  std::string denormalize(const std::string& normalized) const {
    auto tokens = corpus::tokenize(corpus::denormalize(normalized, surfaces_));
    for (auto& t : tokens)
      if (auto it = slots_.find(t); it != slots_.end()) t = it->second;
    return corpus::join(tokens);
  }

 private:
  std::string order_token(const std::string& entity, const std::string& surface) {
    auto it = index_.find(entity);
    if (it == index_.end()) {
      surfaces_.push_back(surface);
      it = index_.emplace(entity, surfaces_.size()).first;
    }
    return corpus::entity_order_token(it->second);
  }

  std::vector<std::string> surfaces_;
  std::map<std::string, std::size_t> index_;  // catalog id -> 1-based order
  std::map<std::string, std::string> slots_;
};

}  // namespace ids::service
