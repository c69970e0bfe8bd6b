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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <set>

#include "gradcheck.hpp"
#include "ids/baselines/baseline.hpp"
#include "ids/corpus/generator.hpp"
#include "ids/corpus/normalize.hpp"

namespace ids::baselines {
namespace {

namespace fs = std::filesystem;

corpus::Dialogue toy_dialogue(std::vector<corpus::Turn> turns) {
  corpus::Dialogue d;
  d.tier = 1;
  d.turns = std::move(turns);
  return d;
}

struct Toy {
  std::vector<corpus::Dialogue> dialogues{
      toy_dialogue({{"hello there", "hi how can i help"}, {"where is my parcel", "please give the order number"}}),
      toy_dialogue({{"price of the laptop", "it costs a lot"}}),
      toy_dialogue({{"i want a refund", "refund approved"}, {"thanks bye", "goodbye"}}),
  };
  corpus::Vocab vocab;
  Inventory inventory;
  std::vector<Example> examples;

  Toy() {
    std::vector<std::string> tokens{corpus::Vocab::kPadToken, corpus::Vocab::kUnkToken};
    std::set<std::string> seen;
    for (const auto& d : dialogues)
      for (const auto& t : d.turns)
        for (const auto& s : {t.user, t.system})
          for (const auto& w : corpus::tokenize(s))
            if (seen.insert(w).second) tokens.push_back(w);
    vocab = corpus::Vocab::from_tokens(tokens);
    inventory = Inventory::from_dialogues(dialogues);
    examples = make_examples(dialogues, inventory, vocab);
  }
};

bool same_params(const nn::ParameterStore& a, const nn::ParameterStore& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if ((*ia)->value.shape() != (*ib)->value.shape() ||
        std::memcmp((*ia)->value.data(), (*ib)->value.data(), 8 * (*ia)->value.size()) != 0)
      return false;
  return true;
}

TEST(Examples, ContextEndsWithUserTurnAndTargetsInventory) {
  Toy toy;
  ASSERT_EQ(toy.examples.size(), 5u);
  EXPECT_EQ(toy.inventory.size(), 5u);
  EXPECT_EQ(toy.examples[1].utterances.size(), 3u);
  EXPECT_EQ(toy.examples[1].utterances.back(), toy.vocab.encode("where is my parcel"));
  EXPECT_EQ(toy.examples[1].target, toy.inventory.find("please give the order number"));
  Inventory small({"hi how can i help"});
  auto ex = make_examples(toy.dialogues, small, toy.vocab);
  EXPECT_EQ(ex[0].target, 0u);
  EXPECT_EQ(ex[1].target, kNoTarget);
}

TEST(TfIdf, ExactTrainingContextRetrievesItsResponse) {
  Toy toy;
  auto b = train_baseline(Kind::kIr, toy.examples, toy.inventory, toy.vocab, {});
  for (const auto& ex : toy.examples) EXPECT_EQ(b.predict(ex), ex.target);
  EXPECT_DOUBLE_EQ(b.accuracy(toy.examples), 1.0);
}

TEST(TfIdf, IdfFollowsSmoothedFormula) {
  Toy toy;
  auto idx = TfIdfIndex::fit(toy.examples, encode_inventory(toy.inventory, toy.vocab));
  // "laptop" appears in one of five documents, "the" in two.
  const double d = 5.0;
  EXPECT_DOUBLE_EQ(idx.idf(toy.vocab.index("laptop")), std::log((1 + d) / (1 + 1.0)) + 1.0);
  EXPECT_DOUBLE_EQ(idx.idf(toy.vocab.index("the")), std::log((1 + d) / (1 + 2.0)) + 1.0);
}

TEST(TfIdf, OrthogonalVectorsHaveZeroCosine) {
  SparseVector a{{1, 2.0}, {3, 1.0}}, b{{2, 5.0}, {4, 1.0}};
  EXPECT_EQ(cosine(a, b), 0.0);
  EXPECT_EQ(cosine(a, {}), 0.0);
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-15);
}

TEST(Rank, SingleResponseInventoryHasProbabilityOne) {
  Toy toy;
  Inventory one({"goodbye"});
  auto ex = make_examples(toy.dialogues, one, toy.vocab);
  for (Kind k : {Kind::kIr, Kind::kSem, Kind::kDlstm, Kind::kMemN2N}) {
    TrainConfig tc;
    tc.max_epochs = 1;
    auto b = train_baseline(k, ex, one, toy.vocab, tc);
    for (const auto& e : ex) {
      auto p = b.rank(e);
      ASSERT_EQ(p.size(), 1u) << kind_name(k);
      EXPECT_EQ(p[0], 1.0) << kind_name(k);
    }
  }
}

TEST(Rank, DistributionsSumToOne) {
  Toy toy;
  for (Kind k : {Kind::kIr, Kind::kSem, Kind::kDlstm, Kind::kMemN2N}) {
    TrainConfig tc;
    tc.max_epochs = 2;
    auto b = train_baseline(k, toy.examples, toy.inventory, toy.vocab, tc);
    for (const auto& e : toy.examples) {
      double s = 0.0;
      for (double p : b.rank(e)) s += p;
      EXPECT_NEAR(s, 1.0, 1e-12) << kind_name(k);
    }
  }
}

TEST(Sem, ZeroEmbeddingsGiveUniformScoresAndChanceAccuracy) {
  Toy toy;
  TrainConfig tc;
  tc.max_epochs = 1;
  auto b = train_baseline(Kind::kSem, toy.examples, toy.inventory, toy.vocab, tc);
  for (auto& p : b.ranker()->params()) p->value.fill(0.0);
  for (const auto& e : toy.examples)
    for (double p : b.rank(e)) EXPECT_DOUBLE_EQ(p, 0.2);
  // One example per response, ties go to id 0: exactly 1/|R| correct.
  EXPECT_DOUBLE_EQ(b.accuracy(toy.examples), 1.0 / 5.0);
}

TEST(MemN2N, ZeroMemoryWeightsReduceToBagOfWordsDot) {
  Toy toy;
  TrainConfig tc;
  tc.max_epochs = 1;
  auto b = train_baseline(Kind::kMemN2N, toy.examples, toy.inventory, toy.vocab, tc);
  auto& ps = b.ranker()->params();
  for (const char* n : {"memn2n.memory_in", "memn2n.memory_out", "memn2n.time_in", "memn2n.time_out"})
    ps.get(n).value.fill(0.0);
  const auto& q = ps.get("memn2n.query").value;
  const auto& w = ps.get("memn2n.answer").value;
  const auto enc = encode_inventory(toy.inventory, toy.vocab);
  const Example& ex = toy.examples[1];  // has two memories
  std::vector<double> direct(toy.inventory.size());
  for (std::size_t r = 0; r < direct.size(); ++r) {
    for (std::size_t d = 0; d < q.cols(); ++d) {
      double u = 0.0, y = 0.0;
      for (auto tok : ex.utterances.back()) u += q.at(tok, d);
      for (auto tok : enc.responses[r]) y += w.at(tok, d);
      direct[r] += u * y;
    }
  }
  nn::Tape t;
  auto rows = b.ranker()->encode_responses(t, enc);
  auto s = t.value(b.ranker()->scores(t, ex, rows)).to_vector();
  for (std::size_t r = 0; r < direct.size(); ++r) EXPECT_NEAR(s[r], direct[r], 1e-12);
}

TEST(Dlstm, ContextIsTruncatedToMostRecentTokens) {
  RankerConfig rc;
  rc.vocab_size = 30;
  rc.max_context_tokens = 5;
  nn::Rng rng(1);
  DlstmRanker r(rc, rng);
  Example ex{{{2, 3, 4}, {5, 6}, {7, 8}}, 0};
  EXPECT_EQ(r.flatten(ex), (std::vector<std::size_t>{5, 6, 30, 7, 8}));
}

TEST(Training, FixedSeedGivesIdenticalParameters) {
  Toy toy;
  for (Kind k : {Kind::kSem, Kind::kDlstm, Kind::kMemN2N}) {
    TrainConfig tc;
    tc.max_epochs = 3;
    tc.batch_size = 2;
    tc.seed = 77;
    auto a = train_baseline(k, toy.examples, toy.inventory, toy.vocab, tc);
    auto b = train_baseline(k, toy.examples, toy.inventory, toy.vocab, tc);
    EXPECT_TRUE(same_params(a.ranker()->params(), b.ranker()->params())) << kind_name(k);
    tc.seed = 78;
    auto c = train_baseline(k, toy.examples, toy.inventory, toy.vocab, tc);
    EXPECT_FALSE(same_params(a.ranker()->params(), c.ranker()->params())) << kind_name(k);
  }
}

TEST(Training, EarlyStoppingKeepsBestEpoch) {
  Toy toy;
  TrainConfig tc;
  tc.max_epochs = 30;
  tc.patience = 3;
  tc.batch_size = 2;
  std::vector<EpochLog> logs;
  auto b = train_baseline(Kind::kSem, toy.examples, toy.inventory, toy.vocab, tc, &toy.examples, {},
                          [&](const EpochLog& l) { logs.push_back(l); });
  ASSERT_FALSE(logs.empty());
  double best = -1.0;
  std::size_t best_epoch = 0;
  for (const auto& l : logs)
    if (l.valid_accuracy > best) best = l.valid_accuracy, best_epoch = l.epoch;
  EXPECT_TRUE(logs.size() == tc.max_epochs || logs.size() == best_epoch + tc.patience);
  EXPECT_DOUBLE_EQ(b.accuracy(toy.examples), best);
}

TEST(Training, UnknownKindIsContractViolation) {
  EXPECT_THROW(kind_from_name("hcn"), ContractViolation);
  EXPECT_EQ(kind_from_name("memn2n"), Kind::kMemN2N);
}

TEST(Training, RankerLossGradientsMatchFiniteDifferences) {
  Toy toy;
  const auto enc = encode_inventory(toy.inventory, toy.vocab);
  for (Kind k : {Kind::kSem, Kind::kDlstm, Kind::kMemN2N}) {
    RankerConfig rc;
    rc.vocab_size = toy.vocab.size();
    rc.embed_dim = 4;
    rc.hidden_dim = 3;
    rc.max_memories = 4;
    rc.init = 0.5;
    nn::Rng rng(5);
    auto r = make_ranker(k, rc, rng);
    auto loss = [&](nn::Tape& t) {
      auto rows = r->encode_responses(t, enc);
      std::vector<nn::Var> terms;
      for (const auto& ex : toy.examples) terms.push_back(t.pick(t.log_softmax(r->scores(t, ex, rows)), ex.target));
      return t.add_n(terms);
    };
    auto res = check::check_gradients(r->params(), loss, 1e-5, 200, {}, 1e-5);
    EXPECT_LE(res.max_rel_error, 1e-4) << kind_name(k) << " " << res.worst;
  }
}

TEST(Persistence, SaveLoadPreservesRanking) {
  Toy toy;
  for (Kind k : {Kind::kIr, Kind::kSem, Kind::kDlstm, Kind::kMemN2N}) {
    TrainConfig tc;
    tc.max_epochs = 2;
    auto a = train_baseline(k, toy.examples, toy.inventory, toy.vocab, tc);
    const fs::path path = fs::temp_directory_path() / (std::string("ids_baseline_") + kind_name(k));
    a.save(path);
    auto b = Baseline::load(path);
    fs::remove(path);
    EXPECT_EQ(b.kind(), k);
    EXPECT_EQ(b.inventory().texts(), a.inventory().texts());
    for (const auto& e : toy.examples) EXPECT_EQ(a.rank(e), b.rank(e)) << kind_name(k);
  }
}

TEST(Dlstm, OneEpochOnTierOneBeatsChanceFiveFold) {
  auto ds = corpus::generate(1, {2000, 500, 500}, 7);
  auto train = corpus::normalize_all(ds.train);
  auto test = corpus::normalize_all(ds.test);
  auto vocab = corpus::build_vocab(train);
  auto inv = Inventory::from_dialogues(train);
  TrainConfig tc;
  tc.max_epochs = 1;
  tc.patience = 0;
  auto b = train_baseline(Kind::kDlstm, make_examples(train, inv, vocab), inv, vocab, tc);
  const double chance = 1.0 / static_cast<double>(inv.size());
  EXPECT_GE(b.accuracy(make_examples(test, inv, vocab)), 5.0 * chance);
}

}  // namespace
}  // namespace ids::baselines
