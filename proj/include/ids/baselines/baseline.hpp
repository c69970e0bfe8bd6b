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

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>

#include "ids/baselines/rankers.hpp"
#include "ids/baselines/tfidf.hpp"
#include "ids/corpus/vocab.hpp"
#include "ids/nn/adam.hpp"
#include "ids/nn/checkpoint.hpp"
#include "ids/nn/tensor.hpp"

namespace ids::baselines {

struct TrainConfig {
  std::size_t max_epochs = 30;
  std::size_t patience = 3;  // epochs without validation gain; 0 disables early stopping
  std::size_t batch_size = 32;
  double learning_rate = 0.001;
  std::uint64_t seed = 1;
};

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double valid_accuracy = -1.0;  // -1 when no validation set
};

/// A trained baseline over a frozen inventory. Always answers.
class Baseline {
 public:
  Baseline(Kind kind, Inventory inventory, corpus::Vocab vocab)
      : kind_(kind), inventory_(std::move(inventory)), vocab_(std::move(vocab)),
        encoded_(encode_inventory(inventory_, vocab_)) {
    IDS_REQUIRE(inventory_.size() > 0, "baseline inventory is empty");
  }

  Kind kind() const { return kind_; }
  const Inventory& inventory() const { return inventory_; }
  const corpus::Vocab& vocab() const { return vocab_; }
  const EncodedInventory& encoded_inventory() const { return encoded_; }
  NeuralRanker* ranker() { return ranker_.get(); }
  const NeuralRanker* ranker() const { return ranker_.get(); }
  const TfIdfIndex* index() const { return index_ ? &*index_ : nullptr; }

  void set_ranker(std::unique_ptr<NeuralRanker> r) { ranker_ = std::move(r); }
  void set_index(TfIdfIndex idx) { index_ = std::move(idx); }

  /// Distribution over the inventory (softmax of cosines for IR).
  std::vector<double> rank(const Example& ex) const {
    if (index_) return nn::softmax(index_->scores(ex));
    IDS_REQUIRE(ranker_ != nullptr, "baseline has no model");
    Tape t;
    auto rows = ranker_->encode_responses(t, encoded_);
    return t.value(t.softmax(ranker_->scores(t, ex, rows))).to_vector();
  }

  /// Argmax with lowest-id tie-break; IR ranks raw cosines.
  std::size_t predict(const Example& ex) const {
    std::vector<double> s = index_ ? index_->scores(ex) : rank(ex);
    std::size_t best = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] > s[best]) best = i;
    return best;
  }

  /// Examples whose argmax is the gold response.
  std::size_t count_correct(const std::vector<Example>& examples) const {
    std::size_t correct = 0;
    if (index_) {
      for (const auto& ex : examples) correct += ex.target != kNoTarget && predict(ex) == ex.target;
      return correct;
    }
    // Response encodings are shared by every example of a batch.
    for (std::size_t start = 0; start < examples.size(); start += 64) {
      Tape t;
      auto rows = ranker_->encode_responses(t, encoded_);
      for (std::size_t i = start; i < std::min(examples.size(), start + 64); ++i) {
        const auto& ex = examples[i];
        auto s = t.value(ranker_->scores(t, ex, rows));
        std::size_t best = 0;
        for (std::size_t j = 1; j < s.size(); ++j)
          if (s[j] > s[best]) best = j;
        correct += ex.target != kNoTarget && best == ex.target;
      }
    }
    return correct;
  }

  double accuracy(const std::vector<Example>& examples) const {
    if (examples.empty()) return 0.0;
    return static_cast<double>(count_correct(examples)) / static_cast<double>(examples.size());
  }

  void save(const std::filesystem::path& path) const {
    nlohmann::json meta{{"kind", kind_name(kind_)}, {"inventory", inventory_.texts()}, {"vocab", vocab_.to_json()}};
    if (index_) {
      meta["index"] = index_->to_json();
      std::ofstream os(path);
      if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
      os << meta.dump() << "\n";
      return;
    }
    nn::Checkpoint ck = nn::make_checkpoint(ranker_->params());
    meta["ranker"] = to_json(ranker_->config());
    ck.extra = meta;
    nn::save_checkpoint(path, ck);
  }

  static Baseline load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
    char first = 0;
    is.get(first);
    is.close();
    if (first == '{') {
      std::ifstream js(path);
      nlohmann::json meta = nlohmann::json::parse(js);
      Baseline b(kind_from_name(meta.at("kind")), Inventory(meta.at("inventory").get<std::vector<std::string>>()),
                 corpus::Vocab::from_json(meta.at("vocab")));
      b.set_index(TfIdfIndex::from_json(meta.at("index")));
      return b;
    }
    nn::Checkpoint ck = nn::load_checkpoint(path);
    const auto& meta = ck.extra;
    Baseline b(kind_from_name(meta.at("kind")), Inventory(meta.at("inventory").get<std::vector<std::string>>()),
               corpus::Vocab::from_json(meta.at("vocab")));
    nn::Rng rng(0);
    auto r = make_ranker(b.kind(), ranker_config_from_json(meta.at("ranker")), rng);
    nn::restore_checkpoint(ck, r->params());
    b.set_ranker(std::move(r));
    return b;
  }

 private:
  Kind kind_;
  Inventory inventory_;
  corpus::Vocab vocab_;
  EncodedInventory encoded_;
  std::unique_ptr<NeuralRanker> ranker_;
  std::optional<TfIdfIndex> index_;
};

/// Mean cross-entropy over one batch, then one Adam step. Examples whose
/// gold response is outside the inventory are skipped.
inline double train_batch(NeuralRanker& r, const EncodedInventory& inv, const std::vector<const Example*>& batch,
                          nn::AdamState& adam) {
  r.params().zero_grad();
  Tape t;
  auto rows = r.encode_responses(t, inv);
  std::vector<Var> losses;
  for (const Example* ex : batch) {
    if (ex->target == kNoTarget) continue;
    losses.push_back(t.pick(t.log_softmax(r.scores(t, *ex, rows)), ex->target));
  }
  if (losses.empty()) return 0.0;
  Var loss = t.scale(t.add_n(losses), -1.0 / static_cast<double>(losses.size()));
  t.backward(loss);
  nn::adam_step(r.params(), adam);
  return t.scalar(loss);
}

/// Trains a baseline on `train`. With a validation set and patience > 0,
/// keeps the parameters of the best validation epoch and stops after
/// `patience` epochs without improvement.
inline Baseline train_baseline(Kind kind, const std::vector<Example>& train, const Inventory& inventory,
                               const corpus::Vocab& vocab, const TrainConfig& cfg,
                               const std::vector<Example>* valid = nullptr, RankerConfig rcfg = {},
                               const std::function<void(const EpochLog&)>& on_epoch = {}) {
  Baseline b(kind, inventory, vocab);
  if (kind == Kind::kIr) {
    b.set_index(TfIdfIndex::fit(train, b.encoded_inventory()));
    return b;
  }
  nn::Rng rng(cfg.seed);
  nn::Rng init = rng.fork(1);
  rcfg.vocab_size = vocab.size();
  b.set_ranker(make_ranker(kind, rcfg, init));
  NeuralRanker& r = *b.ranker();
  nn::AdamState adam;
  adam.learning_rate = cfg.learning_rate;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  nn::Rng shuffler = rng.fork(2);
  const bool early = valid && cfg.patience > 0;
  double best = -1.0;
  std::size_t stale = 0;
  nn::Checkpoint best_params;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffler.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      std::vector<const Example*> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + cfg.batch_size); ++i)
        batch.push_back(&train[order[i]]);
      loss_sum += train_batch(r, b.encoded_inventory(), batch, adam);
      ++batches;
    }
    EpochLog log{epoch, batches ? loss_sum / static_cast<double>(batches) : 0.0, -1.0};
    if (valid) log.valid_accuracy = b.accuracy(*valid);
    if (on_epoch) on_epoch(log);
    if (!early) continue;
    if (log.valid_accuracy > best) {
      best = log.valid_accuracy;
      best_params = nn::make_checkpoint(r.params());
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  if (early && best >= 0.0) nn::restore_checkpoint(best_params, r.params());
  return b;
}

}  // namespace ids::baselines
