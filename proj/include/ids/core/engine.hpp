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

// The incremental dialogue engine: latent-variable response ranking, the
// sample-dispersion refusal gate, and single-pass ELBO updates from human
// interventions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "ids/core/divergence.hpp"
#include "ids/core/pool.hpp"
#include "ids/core/response_set.hpp"
#include "ids/corpus/vocab.hpp"
#include "ids/encoder/encoder.hpp"
#include "ids/nn/adam.hpp"
#include "ids/nn/checkpoint.hpp"
#include "ids/nn/gaussian.hpp"
#include "ids/nn/layers.hpp"
#include "ids/nn/parameters.hpp"
#include "ids/nn/rng.hpp"
#include "ids/nn/tape.hpp"

namespace ids::core {

using nn::Tape;
using nn::Var;

struct IdsConfig {
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;
  std::size_t attention_dim = 32;
  std::size_t context_dim = 64;
  std::size_t latent_dim = 20;
  std::size_t net_hidden = 64;  // prior / inference MLP width
  std::size_t samples = 50;     // K, assessment samples
  std::size_t mc_samples = 50;  // ELBO reconstruction samples
  double tau1 = 0.3;
  double tau2 = 0.3;
  std::size_t top_t = 5;
  double learning_rate = 0.001;
  double log_var_min = -20.0;
  double log_var_max = 2.0;
  std::size_t max_tokens = 64;
  std::size_t max_context = 40;
  // Large latent rows keep z from being ignored by the scorer; with small
  // ones the model collapses to confident softmax outputs and the JSD gate
  // never fires.
  double embedding_init = 1.0;
  double weight_init = 0.2;
  double latent_init = 8.0;  // latent rows of the bilinear map; 0 means weight_init
  bool tie_inference_to_prior = false;
  std::uint64_t seed = 1;
};

inline nlohmann::json to_json(const IdsConfig& c) {
  return {{"embed_dim", c.embed_dim},     {"hidden_dim", c.hidden_dim},
          {"attention_dim", c.attention_dim}, {"context_dim", c.context_dim},
          {"latent_dim", c.latent_dim},   {"net_hidden", c.net_hidden},
          {"samples", c.samples},         {"mc_samples", c.mc_samples},
          {"tau1", c.tau1},               {"tau2", c.tau2},
          {"top_t", c.top_t},             {"learning_rate", c.learning_rate},
          {"log_var_min", c.log_var_min}, {"log_var_max", c.log_var_max},
          {"max_tokens", c.max_tokens},   {"max_context", c.max_context},
          {"embedding_init", c.embedding_init}, {"weight_init", c.weight_init}, {"latent_init", c.latent_init},
          {"tie_inference_to_prior", c.tie_inference_to_prior}, {"seed", c.seed}};
}

inline IdsConfig ids_config_from_json(const nlohmann::json& j) {
  IdsConfig c;
  auto get = [&](const char* k, auto& v) {
    if (j.contains(k)) v = j.at(k).get<std::decay_t<decltype(v)>>();
  };
  get("embed_dim", c.embed_dim);
  get("hidden_dim", c.hidden_dim);
  get("attention_dim", c.attention_dim);
  get("context_dim", c.context_dim);
  get("latent_dim", c.latent_dim);
  get("net_hidden", c.net_hidden);
  get("samples", c.samples);
  get("mc_samples", c.mc_samples);
  get("tau1", c.tau1);
  get("tau2", c.tau2);
  get("top_t", c.top_t);
  get("learning_rate", c.learning_rate);
  get("log_var_min", c.log_var_min);
  get("log_var_max", c.log_var_max);
  get("max_tokens", c.max_tokens);
  get("max_context", c.max_context);
  get("embedding_init", c.embedding_init);
  get("weight_init", c.weight_init);
  get("latent_init", c.latent_init);
  get("tie_inference_to_prior", c.tie_inference_to_prior);
  get("seed", c.seed);
  return c;
}

enum class Decision { kAnswer, kRefuse };

struct Candidate {
  std::size_t id;
  double score;  // P_avg
};

struct UncertaintyReport {
  std::vector<std::vector<double>> samples;  // P_1 .. P_K
  std::vector<double> p_avg;
  double jsd_avg = 0.0;
  double max_p = 0.0;
  std::size_t argmax = 0;
  double tau1 = 0.3;
  double tau2 = 0.3;
  bool cold_start = false;
  Decision decision = Decision::kRefuse;
  std::vector<Candidate> top;  // descending P_avg, at most T
};

struct Action {
  bool answer = false;
  std::size_t response_id = 0;        // valid when answer
  std::vector<Candidate> candidates;  // escalation list when !answer
};

struct ElboEstimate {
  double recon = 0.0;
  double kl = 0.0;
  double elbo = 0.0;
};

/// Lowest index among maximal entries.
inline std::size_t argmax(std::span<const double> v) {
  IDS_REQUIRE(!v.empty(), "argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

/// Top-T indices by descending value, ties broken by lower index.
inline std::vector<Candidate> top_candidates(std::span<const double> p, std::size_t t) {
  std::vector<std::size_t> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < std::min(t, idx.size()); ++i) out.push_back({idx[i], p[idx[i]]});
  return out;
}

/// Builds the report from K sampled distributions.
inline UncertaintyReport make_report(std::vector<std::vector<double>> samples, double tau1, double tau2,
                                     std::size_t top_t) {
  UncertaintyReport r;
  r.tau1 = tau1;
  r.tau2 = tau2;
  r.p_avg = average_distribution(samples);
  r.jsd_avg = jsd_avg(samples, r.p_avg);
  r.argmax = argmax(r.p_avg);
  r.max_p = r.p_avg[r.argmax];
  r.decision = should_refuse(r.jsd_avg, r.max_p, tau1, tau2) ? Decision::kRefuse : Decision::kAnswer;
  r.top = top_candidates(r.p_avg, top_t);
  r.samples = std::move(samples);
  return r;
}

inline UncertaintyReport cold_start_report(double tau1, double tau2) {
  UncertaintyReport r;
  r.tau1 = tau1;
  r.tau2 = tau2;
  r.cold_start = true;
  r.decision = Decision::kRefuse;
  return r;
}

inline Action respond_or_escalate(const UncertaintyReport& report) {
  Action a;
  if (report.decision == Decision::kAnswer) {
    a.answer = true;
    a.response_id = report.argmax;
  } else {
    a.candidates = report.top;
  }
  return a;
}

class IdsEngine {
 public:
  IdsEngine(const IdsConfig& cfg, corpus::Vocab vocab) : cfg_(cfg), vocab_(std::move(vocab)), rng_(cfg.seed) {
    IDS_REQUIRE(cfg.samples >= 1 && cfg.mc_samples >= 1, "sample counts must be positive");
    IDS_REQUIRE(cfg.tau1 >= 0.0 && cfg.tau2 >= 0.0, "thresholds must be non-negative");
    nn::Rng init = nn::Rng(cfg.seed).fork(0x1D5);
    encoder::EncoderConfig ec;
    ec.vocab_size = vocab_.size();
    ec.embed_dim = cfg.embed_dim;
    ec.hidden_dim = cfg.hidden_dim;
    ec.attention_dim = cfg.attention_dim;
    ec.context_dim = cfg.context_dim;
    ec.max_tokens = cfg.max_tokens;
    ec.max_context = cfg.max_context;
    ec.embedding_init = cfg.embedding_init;
    ec.weight_init = cfg.weight_init;
    encoder_ = encoder::DialogueEncoder::create(store_, ec, init);
    const std::size_t l = cfg.latent_dim;
    const double w = cfg.weight_init;
    prior_ = nn::Mlp::create(store_, "prior", cfg.context_dim, cfg.net_hidden, 2 * l, init, w);
    inference_ = nn::Mlp::create(store_, "inference", cfg.context_dim + encoder_.utterance_dim(), cfg.net_hidden,
                                 2 * l, init, w);
    w_ = &store_.add_uniform("bilinear.w", {cfg.context_dim + l, encoder_.utterance_dim()}, init, w);
    if (cfg.latent_init > 0.0) {
      const std::size_t cols = encoder_.utterance_dim();
      for (std::size_t i = cfg.context_dim * cols; i < w_->value.size(); ++i)
        w_->value.data()[i] *= cfg.latent_init / w;
    }
    adam_.learning_rate = cfg.learning_rate;
  }

  IdsEngine(const IdsEngine&) = delete;
  IdsEngine& operator=(const IdsEngine&) = delete;

  const IdsConfig& config() const { return cfg_; }
  const corpus::Vocab& vocab() const { return vocab_; }
  nn::ParameterStore& params() { return store_; }
  const nn::ParameterStore& params() const { return store_; }
  const nn::AdamState& optimizer() const { return adam_; }
  const encoder::DialogueEncoder& encoder() const { return encoder_; }
  nn::Rng& rng() { return rng_; }
  const ResponseSet& responses() const { return responses_; }
  DataPool& pool() { return pool_; }
  const DataPool& pool() const { return pool_; }
  std::uint64_t version() const { return version_; }
  std::size_t update_count() const { return updates_; }

  /// Adds responses to R without creating pool records.
  void seed_responses(const std::vector<std::string>& texts) {
    for (const auto& t : texts) responses_.add(t);
  }

  std::vector<std::size_t> token_ids(const std::string& text) const {
    auto ids = vocab_.encode(text);
    IDS_REQUIRE(!ids.empty(), "utterance has no tokens");
    return ids;
  }

  /// E(x) under the current parameters (cached per parameter version).
  /// Const methods may run concurrently; the caches lock internally.
  std::vector<double> utterance_vector(const std::string& text) const {
    std::lock_guard lock(cache_mu_);
    return cached_utterance(text);
  }

  /// E(C) for a normalized context.
  std::vector<double> context_vector(const std::vector<std::string>& context) const {
    IDS_REQUIRE(!context.empty(), "context must hold at least one utterance");
    const std::size_t first = context.size() > cfg_.max_context ? context.size() - cfg_.max_context : 0;
    Tape t;
    Var h = encoder_.context_start(t);
    for (std::size_t i = first; i < context.size(); ++i) {
      const auto& u = utterance_vector(context[i]);
      h = encoder_.context_step(t, h, t.constant(std::span<const double>(u)));
    }
    return t.value(h).to_vector();
  }

  /// Rows E(y) for every y in R (cached per parameter version and |R|).
  std::vector<std::vector<double>> response_matrix() const {
    std::lock_guard lock(cache_mu_);
    if (matrix_version_ != version_ || response_matrix_.size() > responses_.size()) {
      response_matrix_.clear();
      matrix_version_ = version_;
    }
    for (std::size_t i = response_matrix_.size(); i < responses_.size(); ++i)
      response_matrix_.push_back(cached_utterance(responses_.text(i)));
    return response_matrix_;
  }

  nn::GaussianDiag prior(std::span<const double> ctx) const {
    Tape t;
    auto g = gaussian_head(t, prior_.forward(t, t.constant(ctx)));
    return g.value(t);
  }

  nn::GaussianDiag posterior(std::span<const double> ctx, std::span<const double> response) const {
    if (cfg_.tie_inference_to_prior) return prior(ctx);
    Tape t;
    auto g = gaussian_head(t, inference_.forward(t, t.concat(t.constant(ctx), t.constant(response))));
    return g.value(t);
  }

  /// softmax over R of (E(C) ⊕ z)ᵀ W E(y).
  std::vector<double> score_candidates(std::span<const double> ctx, std::span<const double> z) const {
    const auto& rows = response_matrix();
    IDS_REQUIRE(!rows.empty(), "cannot score an empty response set");
    return nn::softmax(scores(bilinear_projection(ctx, z), rows));
  }

  UncertaintyReport assess(const std::vector<std::string>& context) { return assess(context, rng_); }

  UncertaintyReport assess(const std::vector<std::string>& context, nn::Rng& rng) const {
    if (responses_.empty()) return cold_start_report(cfg_.tau1, cfg_.tau2);
    const auto ctx = context_vector(context);
    const auto p = prior(ctx);
    const auto& rows = response_matrix();
    // Project the context part of W once; only the latent part varies per sample.
    const std::vector<double> base = bilinear_projection(ctx, std::vector<double>(cfg_.latent_dim, 0.0));
    std::vector<std::vector<double>> samples;
    samples.reserve(cfg_.samples);
    for (std::size_t k = 0; k < cfg_.samples; ++k) {
      auto z = nn::reparameterize(p, rng.normal_vector(cfg_.latent_dim));
      std::vector<double> v = base;
      add_latent_projection(z, v);
      samples.push_back(nn::softmax(scores(v, rows)));
    }
    return make_report(std::move(samples), cfg_.tau1, cfg_.tau2, cfg_.top_t);
  }

  /// Adds r to R if novel and appends d = (C, r) to the pool.
  const InterventionRecord& record_intervention(const std::vector<std::string>& context, const std::string& response,
                                                Source source = Source::kOracle, std::int64_t timestamp_ms = -1) {
    IDS_REQUIRE(!context.empty(), "intervention context must be non-empty");
    auto added = responses_.add(response);
    InterventionRecord r;
    r.context = context;
    r.response = responses_.text(added.id);
    r.response_id = added.id;
    r.novel = added.novel;
    r.source = source;
    r.timestamp_ms = timestamp_ms >= 0 ? timestamp_ms
                                       : std::chrono::duration_cast<std::chrono::milliseconds>(
                                             std::chrono::system_clock::now().time_since_epoch())
                                             .count();
    return pool_.append(std::move(r));
  }

  /// One Adam step on -ELBO for d = (C, r); returns the estimate before
  /// the step.
  ElboEstimate online_update(const InterventionRecord& record) {
    IDS_REQUIRE(record.response_id < responses_.size() && responses_.text(record.response_id) == record.response,
                "online_update: response is not in R (record the intervention first)");
    store_.zero_grad();
    Tape t;
    ElboEstimate est;
    Var elbo = build_elbo(t, record.context, record.response_id, rng_, est);
    t.backward(t.scale(elbo, -1.0));
    nn::adam_step(store_, adam_);
    ++version_;
    ++updates_;
    {
      std::lock_guard lock(cache_mu_);
      utterance_cache_.clear();
    }
    return est;
  }

  /// ELBO estimate without changing parameters (draws noise from `rng`).
  ElboEstimate elbo_estimate(const std::vector<std::string>& context, std::size_t response_id, nn::Rng& rng) const {
    Tape t;
    ElboEstimate est;
    build_elbo(t, context, response_id, rng, est);
    return est;
  }

  /// log p(r | z, C).
  double log_likelihood(std::span<const double> ctx, std::span<const double> z, std::size_t response_id) const {
    const auto& rows = response_matrix();
    IDS_REQUIRE(response_id < rows.size(), "response id out of range");
    auto logp = nn::log_softmax(scores(bilinear_projection(ctx, z), rows));
    return logp[response_id];
  }

  /// Loss graph used by online_update, exposed for gradient checking.
  Var build_elbo(Tape& t, const std::vector<std::string>& context, std::size_t response_id, nn::Rng& rng,
                 ElboEstimate& est) const {
    IDS_REQUIRE(!context.empty(), "context must hold at least one utterance");
    IDS_REQUIRE(response_id < responses_.size(), "response id out of range");
    const std::size_t first = context.size() > cfg_.max_context ? context.size() - cfg_.max_context : 0;
    std::vector<Var> utterances;
    for (std::size_t i = first; i < context.size(); ++i)
      utterances.push_back(encoder_.encode_utterance(t, token_ids(context[i])).pooled);
    Var ctx = encoder_.encode_context(t, utterances);
    std::vector<Var> rows;
    rows.reserve(responses_.size());
    for (std::size_t i = 0; i < responses_.size(); ++i)
      rows.push_back(encoder_.encode_utterance(t, token_ids(responses_.text(i))).pooled);
    Var rmat = t.stack(rows);
    nn::GaussianVars p = gaussian_head(t, prior_.forward(t, ctx));
    nn::GaussianVars q =
        cfg_.tie_inference_to_prior ? p : gaussian_head(t, inference_.forward(t, t.concat(ctx, rows[response_id])));
    Var w = t.param(*w_);
    std::vector<Var> terms;
    terms.reserve(cfg_.mc_samples);
    for (std::size_t s = 0; s < cfg_.mc_samples; ++s) {
      Var z = nn::reparameterize(t, q, rng.normal_vector(cfg_.latent_dim));
      Var logits = t.matvec(rmat, t.matvec_t(w, t.concat(ctx, z)));
      terms.push_back(t.pick(t.log_softmax(logits), response_id));
    }
    Var recon = t.scale(t.add_n(terms), 1.0 / static_cast<double>(cfg_.mc_samples));
    Var kl = nn::gaussian_kl(t, q, p);
    Var elbo = t.sub(recon, kl);
    est.recon = t.scalar(recon);
    est.kl = t.scalar(kl);
    est.elbo = t.scalar(elbo);
    return elbo;
  }

  // ---- persistence -----------------------------------------------------------

  nn::Checkpoint checkpoint() const {
    nn::Checkpoint ck = nn::make_checkpoint(store_, &adam_, &rng_);
    ck.extra["config"] = to_json(cfg_);
    ck.extra["vocab"] = vocab_.to_json();
    ck.extra["responses"] = responses_.texts();
    ck.extra["pool_size"] = pool_.size();
    ck.extra["version"] = version_;
    ck.extra["updates"] = updates_;
    return ck;
  }

  void save(const std::filesystem::path& path) const { nn::save_checkpoint(path, checkpoint()); }

  /// Rebuilds an engine from a checkpoint. Pool records are not stored in
  /// the checkpoint; `pool` (if given) must hold at least pool_size records
  /// and the first pool_size are restored.
  static std::unique_ptr<IdsEngine> from_checkpoint(const nn::Checkpoint& ck,
                                                    const std::vector<InterventionRecord>* pool = nullptr) {
    auto engine = std::make_unique<IdsEngine>(ids_config_from_json(ck.extra.at("config")),
                                              corpus::Vocab::from_json(ck.extra.at("vocab")));
    nn::restore_checkpoint(ck, engine->store_, &engine->adam_, &engine->rng_);
    engine->seed_responses(ck.extra.at("responses").get<std::vector<std::string>>());
    engine->version_ = ck.extra.at("version").get<std::uint64_t>();
    engine->updates_ = ck.extra.at("updates").get<std::size_t>();
    const std::size_t pool_size = ck.extra.at("pool_size").get<std::size_t>();
    if (pool) {
      if (pool->size() < pool_size) throw nn::CheckpointError("pool file is shorter than the checkpoint offset");
      for (std::size_t i = 0; i < pool_size; ++i) engine->pool_.append((*pool)[i]);
    }
    return engine;
  }

  static std::unique_ptr<IdsEngine> load(const std::filesystem::path& path,
                                         const std::vector<InterventionRecord>* pool = nullptr) {
    return from_checkpoint(nn::load_checkpoint(path), pool);
  }

 private:
  nn::GaussianVars gaussian_head(Tape& t, Var out) const {
    const std::size_t l = cfg_.latent_dim;
    return {t.slice(out, 0, l), t.clamp(t.slice(out, l, l), cfg_.log_var_min, cfg_.log_var_max)};
  }

  /// Wᵀ [ctx; z].
  std::vector<double> bilinear_projection(std::span<const double> ctx, std::span<const double> z) const {
    IDS_REQUIRE(ctx.size() == cfg_.context_dim && z.size() == cfg_.latent_dim, "bilinear: operand sizes");
    const auto& w = w_->value;
    const std::size_t cols = w.cols();
    std::vector<double> v(cols, 0.0);
    for (std::size_t r = 0; r < ctx.size(); ++r) {
      const double x = ctx[r];
      const double* row = w.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) v[c] += row[c] * x;
    }
    add_latent_projection(z, v);
    return v;
  }

  void add_latent_projection(std::span<const double> z, std::vector<double>& v) const {
    const auto& w = w_->value;
    const std::size_t cols = w.cols();
    for (std::size_t r = 0; r < z.size(); ++r) {
      const double x = z[r];
      const double* row = w.data() + (cfg_.context_dim + r) * cols;
      for (std::size_t c = 0; c < cols; ++c) v[c] += row[c] * x;
    }
  }

  static std::vector<double> scores(const std::vector<double>& v, const std::vector<std::vector<double>>& rows) {
    std::vector<double> s(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < v.size(); ++c) acc += rows[i][c] * v[c];
      s[i] = acc;
    }
    return s;
  }

  IdsConfig cfg_;
  corpus::Vocab vocab_;
  nn::ParameterStore store_;
  encoder::DialogueEncoder encoder_;
  nn::Mlp prior_, inference_;
  nn::Parameter* w_ = nullptr;
  nn::AdamState adam_;
  nn::Rng rng_;
  ResponseSet responses_;
  DataPool pool_;
  std::uint64_t version_ = 0;
  std::size_t updates_ = 0;
  // Caller holds cache_mu_.
  const std::vector<double>& cached_utterance(const std::string& text) const {
    auto it = utterance_cache_.find(text);
    if (it != utterance_cache_.end()) return it->second;
    auto ids = token_ids(text);
    return utterance_cache_.emplace(text, encoder_.pooled(ids)).first->second;
  }

  mutable std::mutex cache_mu_;
  mutable std::unordered_map<std::string, std::vector<double>> utterance_cache_;
  mutable std::vector<std::vector<double>> response_matrix_;
  mutable std::uint64_t matrix_version_ = 0;
};

}  // namespace ids::core
