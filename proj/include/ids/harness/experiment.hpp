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

// Experimental protocols over generated tiers. Every run streams dialogues
// turn by turn with the gold history as context; on a refusal the oracle
// supplies the gold response.

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "ids/baselines/baseline.hpp"
#include "ids/core/engine.hpp"
#include "ids/corpus/generator.hpp"
#include "ids/corpus/io.hpp"
#include "ids/corpus/script.hpp"
#include "ids/corpus/vocab.hpp"
#include "ids/harness/config.hpp"
#include "ids/harness/metrics.hpp"

namespace ids::harness {

inline constexpr int kHardestTier = 5;

/// Entity-normalized splits per tier, generated (or read) on first use.
/// One vocabulary, built from the hardest tier's training split, serves
/// every model so that cross-tier contexts encode without unknowns.
class Corpora {
 public:
  explicit Corpora(const ExperimentConfig& cfg) : cfg_(cfg) {}

  const corpus::Dataset& tier(int t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    corpus::Dataset ds;
    if (cfg_.corpus_dir.empty()) {
      ds = corpus::generate(t, cfg_.counts, cfg_.corpus_seed);
    } else {
      const auto dir = corpus::tier_dir(cfg_.corpus_dir, t);
      if (!std::filesystem::exists(dir / "manifest.json"))
        throw std::runtime_error("missing corpus for tier " + std::to_string(t) + " under '" + cfg_.corpus_dir + "'");
      ds = corpus::read_dataset(cfg_.corpus_dir, t);
    }
    ds.train = corpus::normalize_all(ds.train);
    ds.valid = corpus::normalize_all(ds.valid);
    ds.test = corpus::normalize_all(ds.test);
    return cache_.emplace(t, std::move(ds)).first->second;
  }

  const corpus::Vocab& vocab() {
    if (!vocab_) vocab_ = corpus::build_vocab(tier(kHardestTier).train);
    return *vocab_;
  }

 private:
  ExperimentConfig cfg_;
  std::map<int, corpus::Dataset> cache_;
  std::optional<corpus::Vocab> vocab_;
};

struct StreamOptions {
  bool learn = false;  // oracle intervention + online update on refusals
  std::vector<bool>* escalations = nullptr;  // one flag per turn, appended
  std::int64_t* clock = nullptr;  // deterministic timestamps for records
};

/// Streams `dialogues` through the engine. Counts go into `row`.
inline void stream_dialogues(core::IdsEngine& engine, const std::vector<corpus::Dialogue>& dialogues,
                             MetricsRow& row, const StreamOptions& opt = {}) {
  std::int64_t local_clock = 0;
  std::int64_t& clock = opt.clock ? *opt.clock : local_clock;
  for (const auto& d : dialogues) {
    std::vector<std::string> ctx;
    for (const auto& turn : d.turns) {
      ctx.push_back(turn.user);
      const auto rep = engine.assess(ctx);
      const bool refuse = rep.decision == core::Decision::kRefuse;
      if (opt.escalations) opt.escalations->push_back(refuse);
      if (refuse) {
        ++row.refused;
        if (opt.learn) {
          const auto& rec = engine.record_intervention(ctx, turn.system, core::Source::kOracle, clock++);
          engine.online_update(rec);
        }
      } else {
        ++row.answered;
        if (engine.responses().find(turn.system) == rep.argmax) ++row.correct;
      }
      ctx.push_back(turn.system);
    }
  }
}

/// Fresh engine for a tier: random parameters, R seeded with the tier's
/// response inventory. An empty R would never leave cold start usefully:
/// with one response the distribution is a point mass and every turn is
/// answered.
inline std::unique_ptr<core::IdsEngine> make_engine(const ExperimentConfig& cfg, Corpora& corpora, int tier) {
  auto engine = std::make_unique<core::IdsEngine>(cfg.ids, corpora.vocab());
  engine->seed_responses(corpus::canonical_inventory(tier));
  return engine;
}

inline std::unique_ptr<core::IdsEngine> clone(const core::IdsEngine& e) {
  return core::IdsEngine::from_checkpoint(e.checkpoint(), &e.pool().records());
}

struct FromScratchResult {
  MetricsRow train;
  MetricsRow test;
  InterventionCurve curve;
  std::unique_ptr<core::IdsEngine> engine;  // frozen after training
};

using Progress = std::function<void(const std::string&)>;

/// Streams the training split with oracle intervention, then evaluates the
/// frozen model on the test split.
inline FromScratchResult run_from_scratch(int tier, const ExperimentConfig& cfg, Corpora& corpora,
                                          const Progress& progress = {}) {
  const auto& ds = corpora.tier(tier);
  FromScratchResult out;
  out.engine = make_engine(cfg, corpora, tier);
  out.train = {"IDS-", tier, tier};
  std::vector<bool> flags;
  std::int64_t clock = 0;
  stream_dialogues(*out.engine, ds.train, out.train, {true, &flags, &clock});
  out.curve = InterventionCurve::from_flags(flags, cfg.window);
  if (progress) progress("trained on SubD" + std::to_string(tier) + " train split");
  out.test = {"IDS-", tier, tier};
  stream_dialogues(*out.engine, ds.test, out.test);
  return out;
}

struct IdsCrossTier {
  MetricsRow frozen;  // IDS-
  MetricsRow online;  // IDS
};

/// One training stream on `train_tier`, then two evaluations on the test
/// split of `test_tier`: frozen, and with updates on test refusals.
inline IdsCrossTier run_ids_cross_tier(int train_tier, int test_tier, const ExperimentConfig& cfg, Corpora& corpora,
                                       const Progress& progress = {}) {
  auto engine = make_engine(cfg, corpora, train_tier);
  MetricsRow train{"IDS-", train_tier, train_tier};
  std::int64_t clock = 0;
  stream_dialogues(*engine, corpora.tier(train_tier).train, train, {true, nullptr, &clock});
  if (progress) progress("trained on SubD" + std::to_string(train_tier));
  const auto& test = corpora.tier(test_tier).test;
  IdsCrossTier out;
  out.online = {"IDS", train_tier, test_tier};
  out.frozen = {"IDS-", train_tier, test_tier};
  auto online = clone(*engine);
  stream_dialogues(*engine, test, out.frozen);
  stream_dialogues(*online, test, out.online, {true, nullptr, &clock});
  return out;
}

/// Baseline trained on the train tier (validation split for early
/// stopping), evaluated on every turn of the test tier's test split.
/// Turns whose gold response is outside the inventory count as wrong.
inline MetricsRow run_baseline_cross_tier(baselines::Kind kind, int train_tier, int test_tier,
                                          const ExperimentConfig& cfg, Corpora& corpora,
                                          const Progress& progress = {}) {
  const auto& train_ds = corpora.tier(train_tier);
  const auto& vocab = corpora.vocab();
  const auto inventory = baselines::Inventory::from_dialogues(train_ds.train);
  const auto train = baselines::make_examples(train_ds.train, inventory, vocab);
  const auto valid = baselines::make_examples(train_ds.valid, inventory, vocab);
  auto on_epoch = [&](const baselines::EpochLog& log) {
    if (progress)
      progress(std::string(baselines::kind_name(kind)) + " epoch " + std::to_string(log.epoch) +
               " valid " + std::to_string(log.valid_accuracy));
  };
  auto model = baselines::train_baseline(kind, train, inventory, vocab, cfg.baseline,
                                         valid.empty() ? nullptr : &valid, cfg.ranker, on_epoch);
  const auto test = baselines::make_examples(corpora.tier(test_tier).test, inventory, vocab);
  MetricsRow row{baselines::kind_name(kind), train_tier, test_tier};
  row.answered = test.size();
  row.correct = model.count_correct(test);
  return row;
}

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"ir", "sem", "dlstm", "memn2n", "ids-", "ids"};
  return names;
}

inline MetricsRow run_cross_tier(const std::string& model, int train_tier, int test_tier, const ExperimentConfig& cfg,
                                 Corpora& corpora, const Progress& progress = {}) {
  if (model == "ids-" || model == "ids") {
    auto r = run_ids_cross_tier(train_tier, test_tier, cfg, corpora, progress);
    return model == "ids" ? r.online : r.frozen;
  }
  return run_baseline_cross_tier(baselines::kind_from_name(model), train_tier, test_tier, cfg, corpora, progress);
}

struct EmbeddingRecord {
  std::string dialogue;
  std::size_t turn = 0;
  bool sure = false;  // the model answered
  // Chosen response when sure; the oracle's response when unsure, or -1 if
  // it is not in R.
  std::int64_t response_id = -1;
  std::vector<double> vector;
};

/// One record per turn of `dialogues` for a frozen engine.
inline std::vector<EmbeddingRecord> embedding_records(core::IdsEngine& engine,
                                                      const std::vector<corpus::Dialogue>& dialogues) {
  std::vector<EmbeddingRecord> out;
  for (const auto& d : dialogues) {
    std::vector<std::string> ctx;
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
      ctx.push_back(d.turns[i].user);
      const auto rep = engine.assess(ctx);
      EmbeddingRecord r;
      r.dialogue = d.id;
      r.turn = i;
      r.sure = rep.decision == core::Decision::kAnswer;
      if (r.sure) {
        r.response_id = static_cast<std::int64_t>(rep.argmax);
      } else if (auto id = engine.responses().find(d.turns[i].system)) {
        r.response_id = static_cast<std::int64_t>(*id);
      }
      r.vector = engine.context_vector(ctx);
      out.push_back(std::move(r));
      ctx.push_back(d.turns[i].system);
    }
  }
  return out;
}

inline nlohmann::json to_json(const EmbeddingRecord& r) {
  return {{"dialogue", r.dialogue}, {"turn", r.turn}, {"label", r.sure ? "sure" : "unsure"},
          {"response_id", r.response_id}, {"vector", r.vector}};
}

/// JSON lines; returns the record count.
inline std::size_t export_embeddings(core::IdsEngine& engine, const std::vector<corpus::Dialogue>& dialogues,
                                     const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  const auto records = embedding_records(engine, dialogues);
  for (const auto& r : records) os << to_json(r).dump() << '\n';
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
  return records.size();
}

}  // namespace ids::harness
