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

// Trainable response rankers. Each scores every inventory response for a
// context; training is softmax cross-entropy over the inventory.
//
//   SEM     sum(A[context words]) . sum(B[response words])
//   DLSTM   c^T M r, c and r the last LSTM states over the concatenated
//           context (utterances joined by a separator) and the response
//   MemN2N  one memory slot per earlier utterance, query = last user
//           utterance, 3 hops u <- u + sum_i p_i c_i, score u . sum(W[y])

#include <memory>
#include <string>
#include <vector>

#include "ids/baselines/data.hpp"
#include "ids/nn/layers.hpp"
#include "ids/nn/parameters.hpp"
#include "ids/nn/tape.hpp"

namespace ids::baselines {

using nn::Tape;
using nn::Var;

enum class Kind { kIr, kSem, kDlstm, kMemN2N };

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kIr: return "ir";
    case Kind::kSem: return "sem";
    case Kind::kDlstm: return "dlstm";
    case Kind::kMemN2N: return "memn2n";
  }
  return "?";
}

inline Kind kind_from_name(const std::string& s) {
  for (Kind k : {Kind::kIr, Kind::kSem, Kind::kDlstm, Kind::kMemN2N})
    if (s == kind_name(k)) return k;
  throw ContractViolation("unknown baseline kind '" + s + "'");
}

struct RankerConfig {
  std::size_t vocab_size = 0;  // separator is appended as id vocab_size
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;
  std::size_t hops = 3;
  std::size_t max_memories = 40;
  std::size_t max_context_tokens = 100;  // DLSTM keeps the most recent tokens
  double init = 0.1;
};

inline nlohmann::json to_json(const RankerConfig& c) {
  return {{"vocab_size", c.vocab_size},   {"embed_dim", c.embed_dim}, {"hidden_dim", c.hidden_dim},
          {"hops", c.hops},               {"max_memories", c.max_memories},
          {"max_context_tokens", c.max_context_tokens}, {"init", c.init}};
}

inline RankerConfig ranker_config_from_json(const nlohmann::json& j) {
  RankerConfig c;
  c.vocab_size = j.at("vocab_size");
  c.embed_dim = j.at("embed_dim");
  c.hidden_dim = j.at("hidden_dim");
  c.hops = j.at("hops");
  c.max_memories = j.at("max_memories");
  c.max_context_tokens = j.at("max_context_tokens");
  c.init = j.at("init");
  return c;
}

class NeuralRanker {
 public:
  virtual ~NeuralRanker() = default;

  virtual Kind kind() const = 0;

  /// One encoding per inventory response, shared by a whole batch.
  virtual std::vector<Var> encode_responses(Tape& t, const EncodedInventory& inv) const = 0;

  /// Unnormalized scores over the inventory.
  virtual Var scores(Tape& t, const Example& ex, const std::vector<Var>& responses) const = 0;

  nn::ParameterStore& params() { return store_; }
  const nn::ParameterStore& params() const { return store_; }
  const RankerConfig& config() const { return cfg_; }

 protected:
  explicit NeuralRanker(const RankerConfig& cfg) : cfg_(cfg) {
    IDS_REQUIRE(cfg.vocab_size >= 2, "ranker needs a vocabulary");
  }

  std::size_t table_rows() const { return cfg_.vocab_size + 1; }
  std::size_t separator() const { return cfg_.vocab_size; }

  Var bag(Tape& t, nn::Parameter& table, const std::vector<std::size_t>& words) const {
    std::vector<Var> rows;
    rows.reserve(words.size());
    for (auto w : words) rows.push_back(t.row(table, w));
    return t.add_n(rows);
  }

  RankerConfig cfg_;
  nn::ParameterStore store_;
};

class SemRanker : public NeuralRanker {
 public:
  SemRanker(const RankerConfig& cfg, nn::Rng& rng) : NeuralRanker(cfg) {
    context_ = &store_.add_uniform("sem.context", {table_rows(), cfg.embed_dim}, rng, cfg.init);
    response_ = &store_.add_uniform("sem.response", {table_rows(), cfg.embed_dim}, rng, cfg.init);
  }

  Kind kind() const override { return Kind::kSem; }

  std::vector<Var> encode_responses(Tape& t, const EncodedInventory& inv) const override {
    std::vector<Var> out;
    for (const auto& r : inv.responses) out.push_back(bag(t, *response_, r));
    return out;
  }

  Var scores(Tape& t, const Example& ex, const std::vector<Var>& responses) const override {
    std::vector<Var> words;
    for (const auto& u : ex.utterances)
      for (auto w : u) words.push_back(t.row(*context_, w));
    return t.matvec(t.stack(responses), t.add_n(words));
  }

 private:
  nn::Parameter* context_;
  nn::Parameter* response_;
};

class DlstmRanker : public NeuralRanker {
 public:
  DlstmRanker(const RankerConfig& cfg, nn::Rng& rng) : NeuralRanker(cfg) {
    embedding_ = &store_.add_uniform("dlstm.embedding", {table_rows(), cfg.embed_dim}, rng, cfg.init);
    context_ = nn::LstmCell::create(store_, "dlstm.context", cfg.embed_dim, cfg.hidden_dim, rng, cfg.init);
    response_ = nn::LstmCell::create(store_, "dlstm.response", cfg.embed_dim, cfg.hidden_dim, rng, cfg.init);
    bilinear_ = &store_.add_uniform("dlstm.m", {cfg.hidden_dim, cfg.hidden_dim}, rng, cfg.init);
  }

  Kind kind() const override { return Kind::kDlstm; }

  std::vector<Var> encode_responses(Tape& t, const EncodedInventory& inv) const override {
    std::vector<Var> out;
    for (const auto& r : inv.responses) out.push_back(run(t, response_, r));
    return out;
  }

  Var scores(Tape& t, const Example& ex, const std::vector<Var>& responses) const override {
    Var c = run(t, context_, flatten(ex));
    return t.matvec(t.stack(responses), t.matvec_t(t.param(*bilinear_), c));
  }

  /// Context tokens joined by the separator, most recent max_context_tokens.
  std::vector<std::size_t> flatten(const Example& ex) const {
    std::vector<std::size_t> seq;
    for (std::size_t i = 0; i < ex.utterances.size(); ++i) {
      if (i) seq.push_back(separator());
      seq.insert(seq.end(), ex.utterances[i].begin(), ex.utterances[i].end());
    }
    if (seq.size() > cfg_.max_context_tokens) seq.erase(seq.begin(), seq.end() - cfg_.max_context_tokens);
    return seq;
  }

 private:
  Var run(Tape& t, const nn::LstmCell& cell, const std::vector<std::size_t>& words) const {
    auto state = cell.zero_state(t);
    for (auto w : words) state = cell.step(t, state, t.row(*embedding_, w));
    return state.hidden;
  }

  nn::Parameter* embedding_;
  nn::LstmCell context_;
  nn::LstmCell response_;
  nn::Parameter* bilinear_;
};

class MemN2NRanker : public NeuralRanker {
 public:
  MemN2NRanker(const RankerConfig& cfg, nn::Rng& rng) : NeuralRanker(cfg) {
    const std::size_t d = cfg.embed_dim;
    query_ = &store_.add_uniform("memn2n.query", {table_rows(), d}, rng, cfg.init);
    memory_in_ = &store_.add_uniform("memn2n.memory_in", {table_rows(), d}, rng, cfg.init);
    memory_out_ = &store_.add_uniform("memn2n.memory_out", {table_rows(), d}, rng, cfg.init);
    time_in_ = &store_.add_uniform("memn2n.time_in", {cfg.max_memories, d}, rng, cfg.init);
    time_out_ = &store_.add_uniform("memn2n.time_out", {cfg.max_memories, d}, rng, cfg.init);
    answer_ = &store_.add_uniform("memn2n.answer", {table_rows(), d}, rng, cfg.init);
  }

  Kind kind() const override { return Kind::kMemN2N; }

  std::vector<Var> encode_responses(Tape& t, const EncodedInventory& inv) const override {
    std::vector<Var> out;
    for (const auto& r : inv.responses) out.push_back(bag(t, *answer_, r));
    return out;
  }

  Var scores(Tape& t, const Example& ex, const std::vector<Var>& responses) const override {
    IDS_REQUIRE(!ex.utterances.empty(), "memn2n: empty context");
    Var u = bag(t, *query_, ex.utterances.back());
    const std::size_t n = ex.utterances.size() - 1;
    const std::size_t first = n > cfg_.max_memories ? n - cfg_.max_memories : 0;
    if (first < n) {
      std::vector<Var> keys, values;
      for (std::size_t i = first; i < n; ++i) {
        const std::size_t age = n - 1 - i;  // 0 = most recent
        keys.push_back(t.add(bag(t, *memory_in_, ex.utterances[i]), t.row(*time_in_, age)));
        values.push_back(t.add(bag(t, *memory_out_, ex.utterances[i]), t.row(*time_out_, age)));
      }
      Var k = t.stack(keys);
      Var v = t.stack(values);
      for (std::size_t hop = 0; hop < cfg_.hops; ++hop) {
        Var p = t.softmax(t.matvec(k, u));
        u = t.add(u, t.matvec_t(v, p));
      }
    }
    return t.matvec(t.stack(responses), u);
  }

 private:
  nn::Parameter* query_;
  nn::Parameter* memory_in_;
  nn::Parameter* memory_out_;
  nn::Parameter* time_in_;
  nn::Parameter* time_out_;
  nn::Parameter* answer_;
};

inline std::unique_ptr<NeuralRanker> make_ranker(Kind kind, const RankerConfig& cfg, nn::Rng& rng) {
  switch (kind) {
    case Kind::kSem: return std::make_unique<SemRanker>(cfg, rng);
    case Kind::kDlstm: return std::make_unique<DlstmRanker>(cfg, rng);
    case Kind::kMemN2N: return std::make_unique<MemN2NRanker>(cfg, rng);
    case Kind::kIr: break;
  }
  throw ContractViolation(std::string("no neural ranker for kind '") + kind_name(kind) + "'");
}

}  // namespace ids::baselines
