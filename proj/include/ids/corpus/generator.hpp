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

// Dialogue generator: a scripted user simulator drives SystemAgent over
// scenarios legal for a tier. Dialogues are stored with surface entity
// tokens; normalize_entities() produces the model-facing form.

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ids/corpus/catalog.hpp"
#include "ids/corpus/normalize.hpp"
#include "ids/corpus/script.hpp"
#include "ids/corpus/types.hpp"
#include "ids/nn/rng.hpp"

namespace ids::corpus {

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratorConfig {
  std::size_t catalog_size = 50;
  std::size_t products_per_dialogue = 3;
  std::size_t min_scenarios = 1;
  std::size_t max_scenarios = 4;
  double greet_prob = 0.5;
  double bye_prob = 0.5;
  double emotion_prob = 0.3;       // share of emotable user turns with an emotional overlay
  double mixed_emotion_share = 0.5;  // of those, share that carry the clause inline
  std::size_t min_kind_count = 10;
};

struct SplitCounts {
  std::size_t train = 2000, valid = 500, test = 500;
};

struct Dataset {
  int tier = 1;
  std::uint64_t seed = 0;
  Catalog catalog;
  std::vector<Dialogue> train, valid, test;
};

inline Catalog make_catalog(std::uint64_t seed, const GeneratorConfig& cfg = {}) {
  nn::Rng rng = nn::Rng(seed).fork(0xC0FFEE);
  return Catalog::generate(cfg.catalog_size, rng);
}

namespace detail {

class EpisodeBuilder {
 public:
  EpisodeBuilder(int tier, const std::vector<std::string>& pool, const GeneratorConfig& cfg, nn::Rng& rng)
      : tier_(tier), pool_(pool), cfg_(cfg), rng_(rng) {}

  Dialogue build(const std::string& id) {
    d_.id = id;
    d_.tier = tier_;
    if (rng_.bernoulli(cfg_.greet_prob)) say(UserAct{Intent::kGreet});
    const auto kinds = tier_task_scenarios(tier_);
    const std::size_t n = cfg_.min_scenarios + rng_.index(cfg_.max_scenarios - cfg_.min_scenarios + 1);
    for (std::size_t i = 0; i < n; ++i) run(kinds[rng_.index(kinds.size())]);
    if (rng_.bernoulli(cfg_.bye_prob)) say(UserAct{Intent::kBye});
    return std::move(d_);
  }

 private:
  template <std::size_t N>
  Attribute pick(const std::array<Attribute, N>& attrs) {
    return attrs[rng_.index(N)];
  }

  const std::string& any_product() { return pool_[rng_.index(pool_.size())]; }

  void trace(ScenarioKind k) { d_.scenarios.push_back(k); }

  void say(UserAct act) {
    const bool emotional = tier_ >= 5 && is_emotable(act.intent) && rng_.bernoulli(cfg_.emotion_prob);
    bool pure = false;
    if (emotional) {
      const Emotion e = is_after_sales(act.intent) ? Emotion::kNegative : Emotion::kPositive;
      if (rng_.bernoulli(cfg_.mixed_emotion_share)) act.emotion = e;
      else pure = true;
      trace(e == Emotion::kPositive ? ScenarioKind::kPositiveEmotion : ScenarioKind::kNegativeEmotion);
    }
    emit(act);
    if (pure && !agent_.awaiting_product() && !agent_.awaiting_products() && !agent_.awaiting_order_number() &&
        !agent_.awaiting_phone()) {
      emit(UserAct{is_after_sales(act.intent) ? Intent::kNegativeEmotion : Intent::kPositiveEmotion});
    } else if (pure) {
      d_.scenarios.pop_back();
    }
  }

  void emit(const UserAct& act) {
    const auto options = templates_for(act);
    IDS_REQUIRE(!options.empty(), "no template for act");
    std::string text = realize(*options[rng_.index(options.size())], act.entities);
    if (act.emotion != Emotion::kNone) {
      const auto& clauses = emotion_clauses(act.emotion);
      text = clauses[rng_.index(clauses.size())] + " " + text;
    }
    for (const auto& e : act.entities)
      if (std::find(d_.entities.begin(), d_.entities.end(), e) == d_.entities.end()) d_.entities.push_back(e);
    d_.turns.push_back({text, agent_.respond(act)});
  }

  // One attribute query; explicit product, ellipsis, or a follow-up ask.
  void query(Intent intent, Attribute attr, bool first) {
    UserAct act{intent, attr};
    const bool has_focus = agent_.focus().has_value();
    const bool omit = has_focus ? rng_.bernoulli(first ? 0.3 : 0.6) : rng_.bernoulli(0.35);
    if (!omit) act.entities = {any_product()};
    say(act);
    if (agent_.awaiting_product()) say(UserAct{Intent::kProvideProduct, {}, {any_product()}});
  }

  void run(ScenarioKind kind) {
    using K = ScenarioKind;
    trace(kind);
    switch (kind) {
      case K::kQueryProductInfo: {
        const std::size_t n = 1 + rng_.index(3);
        for (std::size_t i = 0; i < n; ++i) query(Intent::kAskAttribute, pick(kAllAttributes), i == 0);
        break;
      }
      case K::kVerifyProductInfo: {
        const std::size_t n = 1 + rng_.index(2);
        for (std::size_t i = 0; i < n; ++i) query(Intent::kVerifyAttribute, pick(kVerifiableAttributes), i == 0);
        break;
      }
      case K::kQueryPaymentMethods:
        ask_some({Intent::kAskPaymentMethods, Intent::kAskInstallment, Intent::kAskCashOnDelivery});
        break;
      case K::kQueryExpressInfo:
        ask_some({Intent::kAskExpressCompany, Intent::kAskDeliveryTime, Intent::kAskFreeShipping});
        break;
      case K::kCompareProducts: {
        std::size_t a = rng_.index(pool_.size());
        std::size_t b = rng_.index(pool_.size() - 1);
        if (b >= a) ++b;
        UserAct act{Intent::kCompare, pick(kComparableAttributes)};
        const bool explicit_pair = rng_.bernoulli(0.5);
        if (explicit_pair) act.entities = {pool_[a], pool_[b]};
        say(act);
        if (agent_.awaiting_products()) say(UserAct{Intent::kProvideTwoProducts, {}, {pool_[a], pool_[b]}});
        break;
      }
      case K::kAskInvoice: order_flow(Intent::kAskInvoice); break;
      case K::kReturnGoods: order_flow(Intent::kReturnGoods); break;
      case K::kExchangeGoods: order_flow(Intent::kExchangeGoods); break;
      case K::kQueryLogistics: order_flow(Intent::kQueryLogistics); break;
      case K::kConsultSystemError:
        say(UserAct{Intent::kReportSystemError});
        say(UserAct{rng_.bernoulli(0.5) ? Intent::kAskHowToUpdate : Intent::kStillNotWorking});
        break;
      case K::kConsultNfcError:
        say(UserAct{Intent::kReportNfcError});
        say(UserAct{Intent::kStillNotWorking});
        break;
      case K::kConsultNetworkError:
        say(UserAct{Intent::kReportNetworkError});
        say(UserAct{Intent::kStillNotWorking});
        break;
      case K::kPositiveEmotion:
      case K::kNegativeEmotion:
        IDS_REQUIRE(false, "emotion is an overlay, not a task scenario");
    }
  }

  void ask_some(std::vector<Intent> intents) {
    rng_.shuffle(intents);
    const std::size_t n = 1 + rng_.index(2);
    for (std::size_t i = 0; i < n; ++i) say(UserAct{intents[i]});
  }

  void order_flow(Intent opening) {
    say(UserAct{opening});
    say(UserAct{Intent::kProvideOrderNumber});
    if (agent_.awaiting_phone()) say(UserAct{Intent::kProvidePhone});
  }

  int tier_;
  const std::vector<std::string>& pool_;
  const GeneratorConfig& cfg_;
  nn::Rng& rng_;
  SystemAgent agent_;
  Dialogue d_;
};

}  // namespace detail

inline Dialogue generate_dialogue(int tier, const Catalog& catalog, const std::string& id, nn::Rng& rng,
                                  const GeneratorConfig& cfg = {}) {
  require_tier(tier);
  IDS_REQUIRE(catalog.size() >= cfg.products_per_dialogue && cfg.products_per_dialogue >= 2,
              "catalog too small for the product pool");
  std::vector<std::size_t> idx(catalog.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  rng.shuffle(idx);
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < cfg.products_per_dialogue; ++i) pool.push_back(catalog[idx[i]].id);
  return detail::EpisodeBuilder(tier, pool, cfg, rng).build(id);
}

/// Scenario kinds of the tier that occur fewer than `min_count` times.
inline std::vector<ScenarioKind> uncovered_kinds(int tier, const std::vector<Dialogue>& split, std::size_t min_count) {
  std::map<ScenarioKind, std::size_t> counts;
  for (const auto& d : split)
    for (auto k : d.scenarios) ++counts[k];
  std::vector<ScenarioKind> out;
  for (auto k : tier_scenarios(tier))
    if (counts[k] < min_count) out.push_back(k);
  return out;
}

inline std::vector<Dialogue> generate_split(int tier, const Catalog& catalog, const std::string& name,
                                            std::size_t count, nn::Rng& rng, const GeneratorConfig& cfg = {}) {
  IDS_REQUIRE(count >= 1, "split '", name, "' needs at least one dialogue");
  std::vector<Dialogue> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(generate_dialogue(tier, catalog, "subd" + std::to_string(tier) + "-" + name + "-" + std::to_string(i),
                                    rng, cfg));
  if (auto missing = uncovered_kinds(tier, out, cfg.min_kind_count); !missing.empty()) {
    std::string msg = "split '" + name + "' covers too few examples of:";
    for (auto k : missing) msg += " [" + std::string(to_string(k)) + "]";
    throw CoverageError(msg);
  }
  return out;
}

/// Pure function of (tier, counts, seed).
inline Dataset generate(int tier, const SplitCounts& counts, std::uint64_t seed, const GeneratorConfig& cfg = {}) {
  require_tier(tier);
  Dataset ds;
  ds.tier = tier;
  ds.seed = seed;
  ds.catalog = make_catalog(seed, cfg);
  nn::Rng root(seed);
  nn::Rng train_rng = root.fork(100 * static_cast<std::uint64_t>(tier) + 1);
  nn::Rng valid_rng = root.fork(100 * static_cast<std::uint64_t>(tier) + 2);
  nn::Rng test_rng = root.fork(100 * static_cast<std::uint64_t>(tier) + 3);
  ds.train = generate_split(tier, ds.catalog, "train", counts.train, train_rng, cfg);
  ds.valid = generate_split(tier, ds.catalog, "valid", counts.valid, valid_rng, cfg);
  ds.test = generate_split(tier, ds.catalog, "test", counts.test, test_rng, cfg);
  return ds;
}

inline std::vector<Dialogue> normalize_all(const std::vector<Dialogue>& ds) {
  std::vector<Dialogue> out;
  out.reserve(ds.size());
  for (const auto& d : ds) out.push_back(normalize_entities(d));
  return out;
}

struct ReplayResult {
  bool consistent = true;
  std::size_t turn = 0;
  std::string detail;
};

/// Parses every user utterance back into an act and checks that a fresh
/// agent reproduces the recorded system responses.
inline ReplayResult replay(const Dialogue& d) {
  static const ActParser parser;
  SystemAgent agent;
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    auto act = parser.parse(d.turns[i].user);
    if (!act) return {false, i, "unparseable user utterance: " + d.turns[i].user};
    std::string got = agent.respond(*act);
    if (got != d.turns[i].system) return {false, i, "expected '" + d.turns[i].system + "', agent said '" + got + "'"};
  }
  return {};
}

}  // namespace ids::corpus
