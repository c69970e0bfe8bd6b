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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <set>

#include "gradcheck.hpp"
#include "ids/core/divergence.hpp"
#include "ids/core/engine.hpp"
#include "ids/corpus/generator.hpp"
#include "ids/corpus/normalize.hpp"
#include "oracles.hpp"

namespace ids::core {
namespace {

namespace fs = std::filesystem;
using nn::Rng;

corpus::Vocab toy_vocab() {
  return corpus::Vocab::from_tokens({corpus::Vocab::kPadToken, corpus::Vocab::kUnkToken, "hi", "hello", "a", "b", "c", "d", "where", "is", "my", "order", "price",
                                     "ok", "thanks", "bye", "sure", "no"});
}

IdsConfig toy_config() {
  IdsConfig cfg;
  cfg.embed_dim = 8;
  cfg.hidden_dim = 4;
  cfg.attention_dim = 4;
  cfg.context_dim = 8;
  cfg.latent_dim = 8;
  cfg.net_hidden = 8;
  cfg.samples = 20;
  cfg.mc_samples = 10;
  cfg.seed = 17;
  return cfg;
}

const std::vector<std::string> kToyResponses{"hello", "where is my order", "ok thanks", "bye", "a b c"};

void randomize(IdsEngine& e, std::uint64_t seed, double scale) {
  Rng r(seed);
  for (auto& p : e.params())
    for (std::size_t i = 0; i < p->value.size(); ++i) p->value[i] = r.uniform(-scale, scale);
}

void zero_params(IdsEngine& e, const std::string& prefix) {
  for (auto& p : e.params())
    if (p->name.rfind(prefix, 0) == 0) p->value.fill(0.0);
}

bool params_bitwise_equal(const nn::ParameterStore& a, const nn::ParameterStore& b) {
  if (a.size() != b.size()) return false;
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end(); ++ia, ++ib) {
    if ((*ia)->name != (*ib)->name || (*ia)->value.shape() != (*ib)->value.shape()) return false;
    if (std::memcmp((*ia)->value.data(), (*ib)->value.data(), 8 * (*ia)->value.size()) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// divergence kernel

TEST(Divergence, WorkedPairMatchesDirectSums) {
  std::vector<double> p{0.8, 0.2}, q{0.5, 0.5};
  const double direct = 0.5 * ((0.8 * std::log(0.8 / 0.5) + 0.2 * std::log(0.2 / 0.5)) +
                               (0.5 * std::log(0.5 / 0.8) + 0.5 * std::log(0.5 / 0.2)));
  EXPECT_NEAR(symmetric_kl(p, q), direct, 1e-12);
  EXPECT_NEAR(symmetric_kl(p, q), 0.2079, 5e-5);
}

TEST(Divergence, RandomPairsMatchOracle) {
  Rng rng(1234);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.index(80);
    auto p = oracle::random_distribution(rng, n);
    auto q = oracle::random_distribution(rng, n);
    ASSERT_NEAR(symmetric_kl(p, q), oracle::symmetric_kl(p, q), 1e-10);
    ASSERT_NEAR(kl_divergence(p, q) + kl_divergence(q, p), 2.0 * oracle::symmetric_kl(p, q), 1e-10);
  }
}

TEST(Divergence, IdenticalSamplesHaveZeroDispersion) {
  Rng rng(5);
  auto p = oracle::random_distribution(rng, 9);
  std::vector<std::vector<double>> samples(50, p);
  EXPECT_EQ(jsd_avg(samples, average_distribution(samples)), 0.0);
}

TEST(Divergence, DispersionIsPermutationInvariantAndNonNegative) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> samples;
    for (int k = 0; k < 50; ++k) samples.push_back(oracle::random_distribution(rng, 7));
    const auto avg = average_distribution(samples);
    const double j = jsd_avg(samples, avg);
    EXPECT_GE(j, 0.0);
    auto shuffled = samples;
    rng.shuffle(shuffled);
    EXPECT_NEAR(jsd_avg(shuffled, average_distribution(shuffled)), j, 1e-12);
  }
}

TEST(Divergence, AverageIsArithmeticMean) {
  Rng rng(7);
  std::vector<std::vector<double>> samples;
  for (int k = 0; k < 50; ++k) samples.push_back(oracle::random_distribution(rng, 12));
  const auto avg = average_distribution(samples);
  for (std::size_t i = 0; i < 12; ++i) {
    double s = 0.0;
    for (const auto& p : samples) s += p[i];
    EXPECT_NEAR(avg[i], s / 50.0, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// decision rule

TEST(Decision, RuleHoldsOnRandomReports) {
  Rng rng(8);
  int refused = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.index(10);
    const double sharp = rng.uniform(0.0, 6.0);
    std::vector<std::vector<double>> samples;
    for (int k = 0; k < 10; ++k) {
      auto p = oracle::random_distribution(rng, n);
      for (auto& x : p) x = std::pow(x, sharp);
      double s = 0.0;
      for (double x : p) s += x;
      for (auto& x : p) x /= s;
      samples.push_back(p);
    }
    auto r = make_report(samples, 0.3, 0.3, 5);
    double j = 0.0;
    for (const auto& p : samples) j += oracle::symmetric_kl(p, r.p_avg);
    j /= static_cast<double>(samples.size());
    const double top = *std::max_element(r.p_avg.begin(), r.p_avg.end());
    const bool expect_refuse = j > 0.3 || top < 0.3;
    EXPECT_EQ(r.decision == Decision::kRefuse, expect_refuse);
    refused += expect_refuse;
    for (const auto& p : r.samples) {
      double s = 0.0;
      for (double x : p) s += x;
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
  EXPECT_GT(refused, 50);
  EXPECT_LT(refused, 450);
}

TEST(Decision, ThresholdsAreStrict) {
  EXPECT_FALSE(should_refuse(0.3, 0.3, 0.3, 0.3));
  EXPECT_TRUE(should_refuse(std::nextafter(0.3, 1.0), 0.9, 0.3, 0.3));
  EXPECT_TRUE(should_refuse(0.0, std::nextafter(0.3, 0.0), 0.3, 0.3));
}

TEST(Decision, ConfidentAgreeingReportAnswers) {
  UncertaintyReport r;
  r.p_avg = {0.9, 0.1};
  r.jsd_avg = 0.1;
  r.max_p = 0.9;
  r.decision = should_refuse(r.jsd_avg, r.max_p, 0.3, 0.3) ? Decision::kRefuse : Decision::kAnswer;
  r.top = top_candidates(r.p_avg, 5);
  auto a = respond_or_escalate(r);
  EXPECT_TRUE(a.answer);
  EXPECT_EQ(a.response_id, 0u);
}

TEST(Decision, DisagreeingSamplesEscalateWhateverThePeak) {
  for (double peak : {0.31, 0.9, 1.0}) {
    EXPECT_TRUE(should_refuse(0.5, peak, 0.3, 0.3));
  }
}

TEST(Decision, EscalationListIsTopFiveDescending) {
  auto r = make_report({{0.1, 0.25, 0.05, 0.28, 0.2, 0.12}}, 0.3, 0.3, 5);
  auto a = respond_or_escalate(r);
  ASSERT_FALSE(a.answer);
  std::vector<std::size_t> ids;
  for (const auto& c : a.candidates) ids.push_back(c.id);
  EXPECT_EQ(ids, (std::vector<std::size_t>{3, 1, 4, 5, 0}));
}

TEST(Decision, EscalationListHasAtMostRCandidates) {
  auto r = make_report({{0.25, 0.25, 0.5}, {0.5, 0.25, 0.25}}, 0.3, 0.3, 5);
  r.decision = Decision::kRefuse;
  auto a = respond_or_escalate(r);
  ASSERT_EQ(a.candidates.size(), 3u);
  for (std::size_t i = 1; i < a.candidates.size(); ++i)
    EXPECT_GE(a.candidates[i - 1].score, a.candidates[i].score);
}

TEST(Decision, ArgmaxTiesGoToLowestId) {
  std::vector<double> p{0.2, 0.4, 0.4};
  EXPECT_EQ(argmax(p), 1u);
  auto top = top_candidates(p, 5);
  EXPECT_EQ(top[0].id, 1u);
  EXPECT_EQ(top[1].id, 2u);
  EXPECT_EQ(top[2].id, 0u);
}

// ---------------------------------------------------------------------------
// prior, scoring, assessment

TEST(Prior, ZeroWeightsGiveStandardNormal) {
  IdsEngine e(IdsConfig{}, toy_vocab());
  zero_params(e, "prior.");
  auto g = e.prior(e.context_vector({"where is my order"}));
  ASSERT_EQ(g.dim(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(g.mean[i], 0.0);
    EXPECT_EQ(g.log_var[i], 0.0);
  }
  EXPECT_EQ(e.params().get("prior.w2").value.rows(), 40u);
}

TEST(Prior, GradientMatchesFiniteDifferences) {
  IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 3, 0.8);
  Rng rng(4);
  std::vector<double> target(16);
  for (auto& x : target) x = rng.uniform(-1.0, 1.0);
  const auto ctx = e.context_vector({"hi", "hello", "where is my order"});
  auto loss = [&](nn::Tape& t) {
    nn::Mlp m = nn::Mlp::bind(e.params(), "prior");
    return t.dot(m.forward(t, t.constant(std::span<const double>(ctx))), t.constant(std::span<const double>(target)));
  };
  auto r = check::check_gradients(e.params(), loss, 1e-5, 1000, {"prior.w1", "prior.b1", "prior.w2", "prior.b2"});
  EXPECT_LE(r.max_rel_error, 1e-4) << r.worst;
}

TEST(Scoring, SingleCandidateHasProbabilityOne) {
  IdsEngine e(toy_config(), toy_vocab());
  e.seed_responses({"hello"});
  auto ctx = e.context_vector({"hi"});
  auto p = e.score_candidates(ctx, std::vector<double>(8, 0.3));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], 1.0);
}

TEST(Scoring, ZeroBilinearMapIsUniform) {
  IdsEngine e(toy_config(), toy_vocab());
  e.seed_responses(kToyResponses);
  zero_params(e, "bilinear.");
  auto p = e.score_candidates(e.context_vector({"hi"}), std::vector<double>(8, 1.0));
  for (double x : p) EXPECT_NEAR(x, 0.2, 1e-15);
}

TEST(Scoring, AppendingCandidatePreservesExistingRatios) {
  IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 9, 0.5);
  e.seed_responses({"hello", "where is my order", "ok thanks"});
  const auto ctx = e.context_vector({"hi", "hello", "price"});
  std::vector<double> z(8, 0.25);
  auto before = e.score_candidates(ctx, z);
  e.seed_responses({"bye"});
  auto after = e.score_candidates(ctx, z);
  ASSERT_EQ(after.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_LT(after[i], before[i]);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(after[i] / after[j], before[i] / before[j], 1e-12);
  }
}

TEST(Assess, EmptyResponseSetIsColdStartRefusal) {
  IdsEngine e(toy_config(), toy_vocab());
  auto r = e.assess({"hi"});
  EXPECT_TRUE(r.cold_start);
  EXPECT_EQ(r.decision, Decision::kRefuse);
  EXPECT_TRUE(r.samples.empty());
  EXPECT_FALSE(respond_or_escalate(r).answer);
  EXPECT_TRUE(respond_or_escalate(r).candidates.empty());
}

TEST(Assess, UniformScoresOverFortyOneCandidatesRefuse) {
  IdsEngine e(IdsConfig{}, toy_vocab());
  std::vector<std::string> many;
  for (int i = 0; i < 41; ++i) many.push_back("order " + std::string(i % 2 ? "a" : "b") + " " + std::to_string(i));
  e.seed_responses(many);
  ASSERT_EQ(e.responses().size(), 41u);
  zero_params(e, "bilinear.");
  auto r = e.assess({"where is my order"});
  EXPECT_NEAR(r.max_p, 1.0 / 41.0, 1e-12);
  EXPECT_NEAR(r.max_p, 0.024, 5e-4);
  EXPECT_EQ(r.decision, Decision::kRefuse);
  EXPECT_EQ(r.samples.size(), 50u);
  EXPECT_EQ(r.top.size(), 5u);
}

TEST(Assess, CollapsedPriorLeavesOnlyThePeakGate) {
  IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 12, 0.6);
  e.seed_responses(kToyResponses);
  zero_params(e, "prior.w2");
  auto& b2 = e.params().get("prior.b2").value;
  for (std::size_t i = 8; i < 16; ++i) b2[i] = -1e6;  // clamped to the log-variance floor
  for (const auto& c : std::vector<std::vector<std::string>>{{"hi"}, {"price"}, {"hi", "hello", "where is my order"}}) {
    auto r = e.assess(c);
    // sigma = exp(-10) at the floor, so the residual spread is O(sigma^2).
    EXPECT_LT(r.jsd_avg, 1e-8);
    EXPECT_EQ(r.decision == Decision::kRefuse, r.max_p < 0.3);
  }
}

TEST(Assess, SamplesAverageToPavg) {
  IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 13, 0.6);
  e.seed_responses(kToyResponses);
  auto r = e.assess({"hi", "hello", "c"});
  ASSERT_EQ(r.samples.size(), 20u);
  for (std::size_t i = 0; i < 5; ++i) {
    double s = 0.0;
    for (const auto& p : r.samples) s += p[i];
    EXPECT_NEAR(r.p_avg[i], s / 20.0, 1e-12);
  }
}

// ---------------------------------------------------------------------------
// response set and interventions

TEST(ResponseSet, CacheIsRefreshedAfterAnUpdate) {
  IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 14, 0.5);
  e.seed_responses(kToyResponses);
  const auto stale = e.response_matrix();
  const auto& rec = e.record_intervention({"hi"}, "hello", Source::kOracle, 0);
  e.online_update(rec);
  const auto& fresh = e.response_matrix();
  ASSERT_EQ(fresh.size(), stale.size());
  EXPECT_NE(fresh, stale);
  for (std::size_t i = 0; i < fresh.size(); ++i)
    EXPECT_EQ(fresh[i], e.encoder().pooled(e.token_ids(e.responses().text(i))));
}

TEST(Intervention, KnownResponseLeavesSetUnchanged) {
  IdsEngine e(toy_config(), toy_vocab());
  e.seed_responses(kToyResponses);
  const auto& r = e.record_intervention({"hi"}, "hello", Source::kOperator, 5);
  EXPECT_FALSE(r.novel);
  EXPECT_EQ(r.response_id, 0u);
  EXPECT_EQ(e.responses().size(), 5u);
  EXPECT_EQ(e.pool().size(), 1u);
}

TEST(Intervention, NovelResponseGrowsSetByOne) {
  IdsEngine e(toy_config(), toy_vocab());
  e.seed_responses(kToyResponses);
  const auto& r = e.record_intervention({"hi"}, "sure  no", Source::kOperator, 5);
  EXPECT_TRUE(r.novel);
  EXPECT_EQ(r.response, "sure no");
  EXPECT_EQ(e.responses().size(), 6u);
  EXPECT_EQ(e.responses().text(r.response_id), "sure no");
}

TEST(Intervention, StreamingTierOneResponsesRebuildsItsInventory) {
  auto ds = corpus::generate(1, {400, 100, 100}, 31);
  auto train = corpus::normalize_all(ds.train);
  IdsEngine e(toy_config(), corpus::build_vocab(train));
  std::set<std::string> distinct;
  std::size_t sizes_seen = 0;
  for (const auto& d : train) {
    std::vector<std::string> ctx;
    for (const auto& t : d.turns) {
      ctx.push_back(t.user);
      const std::size_t before = e.responses().size();
      e.record_intervention(ctx, t.system, Source::kOracle, 0);
      EXPECT_GE(e.responses().size(), before);
      distinct.insert(t.system);
      ctx.push_back(t.system);
      ++sizes_seen;
    }
  }
  EXPECT_EQ(e.responses().size(), distinct.size());
  EXPECT_EQ(e.responses().size(), corpus::canonical_inventory(1).size());
  EXPECT_EQ(e.pool().size(), sizes_seen);
}

TEST(Intervention, PoolFileRoundTrips) {
  const fs::path path = fs::temp_directory_path() / "ids_core_pool_test.jsonl";
  fs::remove(path);
  {
    IdsEngine e(toy_config(), toy_vocab());
    e.pool().attach_file(path);
    e.record_intervention({"hi"}, "hello", Source::kOracle, 1);
    e.record_intervention({"hi", "hello", "price"}, "a b", Source::kOperator, 2);
    auto back = DataPool::read_file(path);
    EXPECT_EQ(back, e.pool().records());
  }
  fs::remove(path);
}

// ---------------------------------------------------------------------------
// online updates

TEST(OnlineUpdate, KlIsNonNegativeAndElboBoundedByRecon) {
  IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 15, 0.5);
  e.seed_responses(kToyResponses);
  const std::vector<std::vector<std::string>> ctxs{{"hi"}, {"where is my order"}, {"hi", "hello", "price"}};
  for (int step = 0; step < 30; ++step) {
    const auto& rec = e.record_intervention(ctxs[step % 3], kToyResponses[step % 5], Source::kOracle, step);
    auto est = e.online_update(rec);
    EXPECT_GE(est.kl, 0.0);
    EXPECT_LE(est.elbo, est.recon);
    EXPECT_NEAR(est.elbo, est.recon - est.kl, 1e-12);
  }
  EXPECT_EQ(e.update_count(), 30u);
}

TEST(OnlineUpdate, RepeatedRecordRaisesElbo) {
  IdsEngine e(toy_config(), toy_vocab());
  e.seed_responses(kToyResponses);
  const auto& rec = e.record_intervention({"hi", "hello", "where is my order"}, "a b c", Source::kOracle, 0);
  // Common random numbers: every evaluation reuses the same noise stream.
  auto measure = [&] {
    Rng noise(99);
    return e.elbo_estimate(rec.context, rec.response_id, noise).elbo;
  };
  double prev = measure();
  int increases = 0;
  for (int i = 0; i < 50; ++i) {
    e.online_update(rec);
    const double now = measure();
    increases += now > prev;
    prev = now;
  }
  EXPECT_GE(increases, 45);
}

TEST(OnlineUpdate, TiedInferenceNetworkHasZeroKl) {
  IdsConfig cfg = toy_config();
  cfg.tie_inference_to_prior = true;
  IdsEngine e(cfg, toy_vocab());
  randomize(e, 16, 0.5);
  e.seed_responses(kToyResponses);
  const auto& rec = e.record_intervention({"hi"}, "bye", Source::kOracle, 0);
  auto est = e.online_update(rec);
  EXPECT_EQ(est.kl, 0.0);
  EXPECT_EQ(est.elbo, est.recon);
}

TEST(OnlineUpdate, ResponseOutsideSetIsContractViolation) {
  IdsEngine e(toy_config(), toy_vocab());
  e.seed_responses(kToyResponses);
  InterventionRecord r;
  r.context = {"hi"};
  r.response = "never seen";
  r.response_id = 7;
  EXPECT_THROW(e.online_update(r), ContractViolation);
}

TEST(OnlineUpdate, ElboGradientMatchesFiniteDifferences) {
  IdsConfig cfg = toy_config();
  cfg.mc_samples = 3;
  IdsEngine e(cfg, toy_vocab());
  randomize(e, 3, 0.8);
  e.seed_responses({"a b", "c d a", "hi"});
  const std::vector<std::string> ctx{"hi a", "b c", "d a b hi"};
  auto loss = [&](nn::Tape& t) {
    Rng noise(11);
    ElboEstimate est;
    return e.build_elbo(t, ctx, 1, noise, est);
  };
  auto r = check::check_gradients(e.params(), loss, 1e-5, 1000, {}, 1e-5);
  EXPECT_LE(r.max_rel_error, 1e-4) << r.worst;
}

TEST(Elbo, BoundsImportanceSampledMarginalOnToyModel) {
  IdsConfig cfg = toy_config();
  cfg.mc_samples = 4000;
  IdsEngine e(cfg, toy_vocab());
  randomize(e, 21, 0.9);
  e.seed_responses(kToyResponses);
  Rng rng(22);
  const auto words = std::vector<std::string>{"hi", "hello", "a", "b", "c", "d", "where", "is", "my", "order", "price"};
  for (int c = 0; c < 5; ++c) {
    std::vector<std::string> ctx;
    for (std::size_t u = 0; u < 1 + rng.index(3); ++u) ctx.push_back(words[rng.index(words.size())] + " " + words[rng.index(words.size())]);
    const std::size_t rid = rng.index(5);
    const auto m = oracle::importance_marginal(e, ctx, rid, 20000, rng);
    Rng noise(23 + c);
    const auto est = e.elbo_estimate(ctx, rid, noise);
    EXPECT_LE(est.elbo, m.log_p + 3.0 * m.standard_error) << "context " << c;
  }
}

// ---------------------------------------------------------------------------
// determinism and persistence

void stream(IdsEngine& e, const std::vector<corpus::Dialogue>& dialogues, std::vector<Decision>& decisions) {
  for (const auto& d : dialogues) {
    std::vector<std::string> ctx;
    for (const auto& t : d.turns) {
      ctx.push_back(t.user);
      auto r = e.assess(ctx);
      decisions.push_back(r.decision);
      if (r.decision == Decision::kRefuse) e.online_update(e.record_intervention(ctx, t.system, Source::kOracle, 0));
      ctx.push_back(t.system);
    }
  }
}

TEST(Determinism, SameSeedSameStreamIsBitIdentical) {
  auto ds = corpus::generate(1, {300, 100, 100}, 41);
  auto train = corpus::normalize_all(ds.train);
  train.resize(15);
  auto vocab = corpus::build_vocab(train);
  IdsConfig cfg = toy_config();
  IdsEngine a(cfg, vocab), b(cfg, vocab);
  a.seed_responses(corpus::canonical_inventory(1));
  b.seed_responses(corpus::canonical_inventory(1));
  std::vector<Decision> da, db;
  stream(a, train, da);
  stream(b, train, db);
  EXPECT_EQ(da, db);
  EXPECT_EQ(a.responses().texts(), b.responses().texts());
  EXPECT_EQ(a.pool().size(), b.pool().size());
  for (std::size_t i = 0; i < a.pool().size(); ++i) {
    auto ra = a.pool()[i], rb = b.pool()[i];
    ra.timestamp_ms = rb.timestamp_ms = 0;
    EXPECT_EQ(ra, rb);
  }
  EXPECT_TRUE(params_bitwise_equal(a.params(), b.params()));
  EXPECT_GT(a.update_count(), 0u);
}

TEST(Checkpoint, RoundTripResumesBitExactly) {
  const fs::path path = fs::temp_directory_path() / "ids_core_ckpt_test.bin";
  auto ds = corpus::generate(1, {300, 100, 100}, 43);
  auto train = corpus::normalize_all(ds.train);
  auto vocab = corpus::build_vocab(train);
  IdsEngine a(toy_config(), vocab);
  a.seed_responses(corpus::canonical_inventory(1));
  std::vector<Decision> sink;
  stream(a, {train.begin(), train.begin() + 5}, sink);
  a.save(path);
  auto b = IdsEngine::load(path, &a.pool().records());
  fs::remove(path);

  EXPECT_TRUE(params_bitwise_equal(a.params(), b->params()));
  EXPECT_EQ(a.responses().texts(), b->responses().texts());
  EXPECT_EQ(a.pool().records(), b->pool().records());
  EXPECT_EQ(a.version(), b->version());
  EXPECT_EQ(a.optimizer().step, b->optimizer().step);
  EXPECT_EQ(a.rng().state(), b->rng().state());
  EXPECT_EQ(to_json(a.config()), to_json(b->config()));

  std::vector<Decision> ra, rb;
  stream(a, {train.begin() + 5, train.begin() + 10}, ra);
  stream(*b, {train.begin() + 5, train.begin() + 10}, rb);
  EXPECT_EQ(ra, rb);
  EXPECT_TRUE(params_bitwise_equal(a.params(), b->params()));
}

TEST(Checkpoint, ShortPoolIsRejected) {
  const fs::path path = fs::temp_directory_path() / "ids_core_ckpt_short.bin";
  IdsEngine a(toy_config(), toy_vocab());
  a.seed_responses(kToyResponses);
  a.record_intervention({"hi"}, "hello", Source::kOracle, 0);
  a.save(path);
  std::vector<InterventionRecord> none;
  EXPECT_THROW(IdsEngine::load(path, &none), nn::CheckpointError);
  fs::remove(path);
}

TEST(Config, JsonRoundTrip) {
  IdsConfig c = toy_config();
  c.tau1 = 0.25;
  c.latent_init = 3.5;
  c.tie_inference_to_prior = true;
  EXPECT_EQ(to_json(ids_config_from_json(to_json(c))), to_json(c));
}

}  // namespace
}  // namespace ids::core
