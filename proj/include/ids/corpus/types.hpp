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
#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ids/nn/tensor.hpp"

namespace ids::corpus {

inline constexpr int kMinTier = 1;
inline constexpr int kMaxTier = 5;

enum class ScenarioKind {
  kQueryProductInfo,
  kQueryPaymentMethods,
  kQueryExpressInfo,
  kVerifyProductInfo,
  kCompareProducts,
  kAskInvoice,
  kConsultSystemError,
  kConsultNfcError,
  kConsultNetworkError,
  kReturnGoods,
  kExchangeGoods,
  kQueryLogistics,
  kPositiveEmotion,
  kNegativeEmotion,
};

inline constexpr std::array<std::pair<ScenarioKind, std::string_view>, 14> kScenarioNames = {{
    {ScenarioKind::kQueryProductInfo, "query product information"},
    {ScenarioKind::kQueryPaymentMethods, "query payment methods"},
    {ScenarioKind::kQueryExpressInfo, "query express information"},
    {ScenarioKind::kVerifyProductInfo, "verify product information"},
    {ScenarioKind::kCompareProducts, "compare two products"},
    {ScenarioKind::kAskInvoice, "ask for an invoice"},
    {ScenarioKind::kConsultSystemError, "consult system error"},
    {ScenarioKind::kConsultNfcError, "consult nfc error"},
    {ScenarioKind::kConsultNetworkError, "consult network error"},
    {ScenarioKind::kReturnGoods, "return goods"},
    {ScenarioKind::kExchangeGoods, "exchange goods"},
    {ScenarioKind::kQueryLogistics, "query logistics"},
    {ScenarioKind::kPositiveEmotion, "express positive emotion"},
    {ScenarioKind::kNegativeEmotion, "express negative emotion"},
}};

inline std::string_view to_string(ScenarioKind k) {
  for (const auto& [kind, name] : kScenarioNames)
    if (kind == k) return name;
  return "unknown";
}

inline ScenarioKind scenario_from_string(std::string_view s) {
  for (const auto& [kind, name] : kScenarioNames)
    if (name == s) return kind;
  throw std::invalid_argument("unknown scenario kind '" + std::string(s) + "'");
}

inline void require_tier(int tier) {
  IDS_REQUIRE(tier >= kMinTier && tier <= kMaxTier, "tier must be in [1, 5], got ", tier);
}

/// Scenario kinds legal in a tier; each tier strictly extends the previous.
inline std::vector<ScenarioKind> tier_scenarios(int tier) {
  require_tier(tier);
  using K = ScenarioKind;
  std::vector<K> kinds = {K::kQueryProductInfo, K::kQueryPaymentMethods, K::kQueryExpressInfo};
  if (tier >= 2) kinds.push_back(K::kVerifyProductInfo);
  if (tier >= 3) kinds.push_back(K::kCompareProducts);
  if (tier >= 4) {
    kinds.insert(kinds.end(), {K::kAskInvoice, K::kConsultSystemError, K::kConsultNfcError, K::kConsultNetworkError,
                               K::kReturnGoods, K::kExchangeGoods, K::kQueryLogistics});
  }
  if (tier >= 5) kinds.insert(kinds.end(), {K::kPositiveEmotion, K::kNegativeEmotion});
  return kinds;
}

/// Task scenarios (everything except the emotional overlay).
inline std::vector<ScenarioKind> tier_task_scenarios(int tier) {
  auto kinds = tier_scenarios(tier);
  std::erase_if(kinds, [](ScenarioKind k) {
    return k == ScenarioKind::kPositiveEmotion || k == ScenarioKind::kNegativeEmotion;
  });
  return kinds;
}

struct Turn {
  std::string user;
  std::string system;

  friend bool operator==(const Turn&, const Turn&) = default;
};

/// One episode. Utterances are space-separated tokens. `entities` is the
/// per-episode entity table in first-appearance order.
struct Dialogue {
  std::string id;
  int tier = 1;
  std::vector<Turn> turns;
  std::vector<ScenarioKind> scenarios;
  std::vector<std::string> entities;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

inline nlohmann::json to_json(const Dialogue& d) {
  nlohmann::json j;
  j["id"] = d.id;
  j["tier"] = d.tier;
  auto& turns = j["turns"] = nlohmann::json::array();
  for (const auto& t : d.turns) turns.push_back({{"user", t.user}, {"system", t.system}});
  auto& sc = j["scenarios"] = nlohmann::json::array();
  for (auto k : d.scenarios) sc.push_back(std::string(to_string(k)));
  j["entities"] = d.entities;
  return j;
}

inline Dialogue dialogue_from_json(const nlohmann::json& j) {
  Dialogue d;
  d.id = j.at("id").get<std::string>();
  d.tier = j.at("tier").get<int>();
  for (const auto& t : j.at("turns")) d.turns.push_back({t.at("user").get<std::string>(), t.at("system").get<std::string>()});
  for (const auto& s : j.at("scenarios")) d.scenarios.push_back(scenario_from_string(s.get<std::string>()));
  d.entities = j.at("entities").get<std::vector<std::string>>();
  return d;
}

}  // namespace ids::corpus
