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

// Dialogue embedding: a bi-directional GRU over word embeddings pooled by
// scalar self-attention gives E(x); a unidirectional GRU over the sequence
// of utterance encodings gives E(C).

#include <algorithm>
#include <atomic>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ids/nn/layers.hpp"
#include "ids/nn/parameters.hpp"
#include "ids/nn/rng.hpp"
#include "ids/nn/tape.hpp"

namespace ids::encoder {

using nn::Tape;
using nn::Var;

struct EncoderConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;     // per direction
  std::size_t attention_dim = 32;
  std::size_t context_dim = 64;
  std::size_t max_tokens = 64;
  std::size_t max_context = 40;
  double embedding_init = nn::kInitScale;  // uniform half-width
  double weight_init = nn::kInitScale;
};

struct UtteranceVars {
  std::vector<Var> hidden;  // h_n = [forward; backward]
  Var scores;               // a_n
  Var weights;              // p_n
  Var pooled;               // E(x)
};

/// Number of utterances truncated to max_tokens so far (process-wide).
inline std::atomic<std::size_t>& truncation_count() {
  static std::atomic<std::size_t> n{0};
  return n;
}

class DialogueEncoder {
 public:
  DialogueEncoder() = default;

  static DialogueEncoder create(nn::ParameterStore& store, const EncoderConfig& cfg, nn::Rng& rng) {
    IDS_REQUIRE(cfg.vocab_size >= 2, "encoder needs a vocabulary");
    DialogueEncoder e;
    e.cfg_ = cfg;
    const double w = cfg.weight_init;
    e.embedding_ = &store.add_uniform("encoder.embedding", {cfg.vocab_size, cfg.embed_dim}, rng, cfg.embedding_init);
    e.forward_ = nn::GruCell::create(store, "encoder.gru_fw", cfg.embed_dim, cfg.hidden_dim, rng, w);
    e.backward_ = nn::GruCell::create(store, "encoder.gru_bw", cfg.embed_dim, cfg.hidden_dim, rng, w);
    e.attention_ = nn::Mlp::create(store, "encoder.attention", 2 * cfg.hidden_dim, cfg.attention_dim, 1, rng, w);
    e.context_ = nn::GruCell::create(store, "encoder.context", 2 * cfg.hidden_dim, cfg.context_dim, rng, w);
    return e;
  }

  const EncoderConfig& config() const { return cfg_; }
  std::size_t utterance_dim() const { return 2 * cfg_.hidden_dim; }
  std::size_t context_dim() const { return cfg_.context_dim; }

  UtteranceVars encode_utterance(Tape& t, std::span<const std::size_t> tokens) const {
    IDS_REQUIRE(!tokens.empty(), "encode_utterance: empty token sequence");
    if (tokens.size() > cfg_.max_tokens) {
      ++truncation_count();
      tokens = tokens.first(cfg_.max_tokens);
    }
    const std::size_t n = tokens.size();
    std::vector<Var> words(n);
    for (std::size_t i = 0; i < n; ++i) words[i] = t.row(*embedding_, tokens[i]);
    std::vector<Var> fw(n), bw(n);
    Var h = zeros(t, cfg_.hidden_dim);
    for (std::size_t i = 0; i < n; ++i) fw[i] = h = forward_.step(t, h, words[i]);
    h = zeros(t, cfg_.hidden_dim);
    for (std::size_t i = n; i-- > 0;) bw[i] = h = backward_.step(t, h, words[i]);
    UtteranceVars out;
    out.hidden.resize(n);
    std::vector<Var> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.hidden[i] = t.concat(fw[i], bw[i]);
      scores[i] = attention_.forward(t, out.hidden[i]);
    }
    out.scores = t.stack(scores);
    out.weights = t.softmax(out.scores);
    out.pooled = t.matvec_t(t.stack(out.hidden), out.weights);
    return out;
  }

  Var context_step(Tape& t, Var prev, Var utterance) const { return context_.step(t, prev, utterance); }

  Var context_start(Tape& t) const { return zeros(t, cfg_.context_dim); }

  /// Final context-GRU state over utterance encodings, oldest dropped
  /// beyond max_context.
  Var encode_context(Tape& t, std::span<const Var> utterances) const {
    IDS_REQUIRE(!utterances.empty(), "encode_context: empty context");
    if (utterances.size() > cfg_.max_context) utterances = utterances.last(cfg_.max_context);
    Var h = context_start(t);
    for (Var u : utterances) h = context_step(t, h, u);
    return h;
  }

  // Value-level helpers (no gradient).

  std::vector<double> pooled(std::span<const std::size_t> tokens) const {
    Tape t;
    return t.value(encode_utterance(t, tokens).pooled).to_vector();
  }

  /// One pooled row per response; rows must be distinct token sequences.
  std::vector<std::vector<double>> encode_response_set(const std::vector<std::vector<std::size_t>>& responses) const {
    IDS_REQUIRE(!responses.empty(), "encode_response_set: empty response set");
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<double>> rows;
    rows.reserve(responses.size());
    for (const auto& r : responses) {
      IDS_REQUIRE(seen.insert(r).second, "encode_response_set: duplicate response");
      rows.push_back(pooled(r));
    }
    return rows;
  }

  std::vector<double> context_step(std::span<const double> prev, std::span<const double> utterance) const {
    Tape t;
    return t.value(context_step(t, t.constant(prev), t.constant(utterance))).to_vector();
  }

  std::vector<double> encode_context(const std::vector<std::vector<double>>& utterances) const {
    Tape t;
    std::vector<Var> vars;
    for (const auto& u : utterances) vars.push_back(t.constant(std::span<const double>(u)));
    return t.value(encode_context(t, vars)).to_vector();
  }

 private:
  static Var zeros(Tape& t, std::size_t n) { return t.constant(std::vector<double>(n, 0.0)); }

  EncoderConfig cfg_;
  nn::Parameter* embedding_ = nullptr;
  nn::GruCell forward_, backward_;
  nn::Mlp attention_;
  nn::GruCell context_;
};

}  // namespace ids::encoder
