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


// Acceptance gate. Runs every headline criterion at its stated tolerance
// and prints one PASS/FAIL line each. Arguments, if any, select criteria by
// substring of their names.
//
// Scale: desk corpora (2000/500/500 per tier) except the from-scratch
// SubD1 check, which runs at 20000/5000/5000.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "gradcheck.hpp"
#include "ids/core/divergence.hpp"
#include "ids/harness/experiment.hpp"
#include "oracles.hpp"

namespace {

using namespace ids;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0, double e = 0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
  return buf;
}

double minutes_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count() / 60.0;
}

void log(const std::string& msg) { std::cerr << "  .. " << msg << std::endl; }

bool same_row(const harness::MetricsRow& a, const harness::MetricsRow& b) {
  return a.answered == b.answered && a.refused == b.refused && a.correct == b.correct;
}

std::string checkpoint_bytes(const core::IdsEngine& e) {
  std::ostringstream os(std::ios::binary);
  nn::write_checkpoint(os, e.checkpoint());
  return os.str();
}

// ---------------------------------------------------------------------------
// shared experiment state, computed on first use

struct Lab {
  harness::ExperimentConfig cfg;
  harness::Corpora corpora{cfg};
  std::map<int, harness::FromScratchResult> sweep;  // desk scale, every tier
  std::map<int, double> sweep_minutes;

  const harness::FromScratchResult& from_scratch(int tier) {
    if (auto it = sweep.find(tier); it != sweep.end()) return it->second;
    const auto t0 = Clock::now();
    auto r = harness::run_from_scratch(tier, cfg, corpora);
    sweep_minutes[tier] = minutes_since(t0);
    log(fmt("SubD%.0f from scratch: train rejection %.4f, test rejection %.4f, test accuracy %.4f (%.1f min)", tier,
            r.train.rejection_rate(), r.test.rejection_rate(), r.test.accuracy(), sweep_minutes[tier]));
    return sweep.emplace(tier, std::move(r)).first->second;
  }
};

Lab& lab() {
  static Lab l;
  return l;
}

// ---------------------------------------------------------------------------
// cross-tier cell: every baseline and IDS trained on SubD1, tested on SubD5

struct CrossTier {
  std::vector<harness::MetricsRow> baselines;
  harness::IdsCrossTier ids;
  double baseline_minutes = 0.0, ids_minutes = 0.0;
};

const CrossTier& cross_tier() {
  static std::optional<CrossTier> cached;
  if (cached) return *cached;
  auto& l = lab();
  CrossTier c;
  auto t0 = Clock::now();
  for (auto kind : {baselines::Kind::kIr, baselines::Kind::kSem, baselines::Kind::kDlstm, baselines::Kind::kMemN2N}) {
    c.baselines.push_back(harness::run_baseline_cross_tier(kind, 1, 5, l.cfg, l.corpora));
    log(c.baselines.back().model +
        fmt(" on SubD5: accuracy %.4f (%.1f min so far)", c.baselines.back().accuracy(), minutes_since(t0)));
  }
  c.baseline_minutes = minutes_since(t0);
  t0 = Clock::now();
  c.ids = harness::run_ids_cross_tier(1, 5, l.cfg, l.corpora);
  c.ids_minutes = minutes_since(t0);
  cached = std::move(c);
  return *cached;
}

Outcome cross_tier_robustness() {
  const auto& c = cross_tier();
  const harness::MetricsRow* best = &c.baselines.front();
  for (const auto& r : c.baselines)
    if (r.accuracy() > best->accuracy()) best = &r;
  const double margin = c.ids.frozen.accuracy() - best->accuracy();
  const double minutes = c.baseline_minutes + c.ids_minutes;
  return {margin >= 0.15 && minutes <= 30.0,
          fmt("IDS- %.1f%% (rejection %.1f%%) vs best baseline ", 100 * c.ids.frozen.accuracy(),
              100 * c.ids.frozen.rejection_rate()) +
              best->model + fmt(" %.1f%%: margin %+.1f pp (need >= 15); %.1f min (need <= 30)",
                                100 * best->accuracy(), 100 * margin, minutes)};
}

Outcome online_adaptation() {
  const auto& c = cross_tier();
  const double acc = c.ids.online.accuracy();
  return {acc >= 0.95 && c.ids_minutes <= 30.0,
          fmt("IDS %.2f%% answered-turn accuracy (need >= 95), rejection %.1f%%; %.1f min (need <= 30)", 100 * acc,
              100 * c.ids.online.rejection_rate(), c.ids_minutes)};
}

// ---------------------------------------------------------------------------

Outcome from_scratch_subd1() {
  harness::ExperimentConfig cfg = lab().cfg;
  cfg.counts = harness::kFullScale;
  harness::Corpora corpora(cfg);
  const auto t0 = Clock::now();
  const auto r = harness::run_from_scratch(1, cfg, corpora);
  const double minutes = minutes_since(t0);
  const double acc = r.test.accuracy(), rej = r.test.rejection_rate();
  return {acc >= 0.99 && rej <= 0.02 && minutes <= 20.0,
          fmt("full scale: test accuracy %.2f%% (need >= 99), test rejection %.2f%% (need <= 2); %.1f min (need <= 20)",
              100 * acc, 100 * rej, minutes)};
}

Outcome rejection_orderings() {
  std::vector<double> train, test;
  for (int t = 1; t <= 5; ++t) {
    train.push_back(lab().from_scratch(t).train.rejection_rate());
    test.push_back(lab().from_scratch(t).test.rejection_rate());
  }
  bool train_ok = true;
  for (int i = 0; i < 4; ++i) train_ok = train_ok && train[i] < train[i + 1];
  const bool test_ok = test[0] <= test[1] && test[1] <= test[2] && test[2] < test[3] && test[3] < test[4];
  std::string d = "train";
  for (double x : train) d += fmt(" %.1f%%", 100 * x);
  d += train_ok ? " (increasing)" : " (NOT increasing)";
  d += "; test";
  for (double x : test) d += fmt(" %.1f%%", 100 * x);
  d += test_ok ? " (ordered)" : " (NOT ordered)";
  return {train_ok && test_ok, d};
}

Outcome intervention_decay() {
  bool ok = true;
  std::string d;
  for (int t = 1; t <= 5; ++t) {
    const auto& c = lab().from_scratch(t).curve;
    const double head = c.head_mean(), tail = c.tail_mean();
    const bool pass = head >= 2.0 * tail;
    ok = ok && pass;
    d += (t == 1 ? "" : "; ") + fmt("SubD%.0f %.3f/%.3f", t, head, tail) + (pass ? "" : " (FAIL)");
  }
  return {ok, "first/last 10% of windows: " + d};
}

// ---------------------------------------------------------------------------

Outcome divergence_oracle() {
  nn::Rng rng(2026);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng.index(80);
    const auto p = oracle::random_distribution(rng, n);
    const auto q = oracle::random_distribution(rng, n);
    worst = std::max(worst, std::abs(core::symmetric_kl(p, q) - oracle::symmetric_kl(p, q)));
  }
  const auto p = oracle::random_distribution(rng, 41);
  const std::vector<std::vector<double>> same(50, p);
  const double jsd = core::jsd_avg(same, core::average_distribution(same));
  return {worst <= 1e-10 && jsd == 0.0,
          fmt("max |error| %.2e over 1000 pairs (need <= 1e-10); JSD of identical samples %.1e", worst, jsd)};
}

corpus::Vocab toy_vocab() {
  return corpus::Vocab::from_tokens({corpus::Vocab::kPadToken, corpus::Vocab::kUnkToken, "hi", "hello", "a", "b",
                                     "c", "d", "where", "is", "my", "order", "price", "ok", "thanks", "bye"});
}

core::IdsConfig toy_config() {
  core::IdsConfig cfg;
  cfg.embed_dim = 8;
  cfg.hidden_dim = 4;
  cfg.attention_dim = 4;
  cfg.context_dim = 8;
  cfg.latent_dim = 8;
  cfg.net_hidden = 8;
  cfg.samples = 20;
  cfg.mc_samples = 3;
  cfg.seed = 31;
  return cfg;
}

void randomize(core::IdsEngine& e, std::uint64_t seed, double scale) {
  nn::Rng r(seed);
  for (auto& p : e.params())
    for (std::size_t i = 0; i < p->value.size(); ++i) p->value[i] = r.uniform(-scale, scale);
}

Outcome gradient_suite() {
  core::IdsEngine e(toy_config(), toy_vocab());
  randomize(e, 5, 0.8);
  e.seed_responses({"a b", "c d a", "hi", "where is my order", "ok thanks bye"});
  const std::vector<std::string> ctx{"hi a", "b c where", "d a b hi", "is my order ok"};
  auto loss = [&](nn::Tape& t) {
    nn::Rng noise(11);
    core::ElboEstimate est;
    return e.build_elbo(t, ctx, 3, noise, est);
  };
  std::vector<std::string> all;
  for (auto& p : e.params()) all.push_back(p->name);
  const std::vector<std::pair<std::string, std::vector<std::string>>> paths{
      {"utterance encoder", {"encoder.embedding", "encoder.gru_fw.", "encoder.gru_bw."}},
      {"attention", {"encoder.attention."}},
      {"context GRU", {"encoder.context."}},
      {"prior", {"prior."}},
      {"inference", {"inference."}},
      {"bilinear W", {"bilinear."}},
      {"ELBO", {""}}};
  bool ok = true;
  std::string d;
  for (const auto& [label, prefixes] : paths) {
    std::vector<std::string> names;
    for (const auto& n : all)
      for (const auto& pre : prefixes)
        if (n.rfind(pre, 0) == 0) names.push_back(n);
    // Every entry; floor 1e-5 judges near-zero gradients on absolute error.
    const auto r = check::check_gradients(e.params(), loss, 1e-5, 1u << 20, names, 1e-5);
    ok = ok && r.max_rel_error <= 1e-4 && r.checked > 0;
    d += (d.empty() ? "" : "; ") + label + fmt(" %.1e", r.max_rel_error);
  }
  return {ok, "max rel. error (need <= 1e-4): " + d};
}

Outcome elbo_bound() {
  core::IdsConfig cfg = toy_config();
  cfg.mc_samples = 4000;
  core::IdsEngine e(cfg, toy_vocab());
  randomize(e, 21, 0.9);
  e.seed_responses({"hello", "where is my order", "ok thanks", "bye", "a b c"});
  nn::Rng rng(22);
  const std::vector<std::string> words{"hi", "hello", "a", "b", "c", "d", "where", "is", "my", "order", "price"};
  int held = 0;
  double slack = 1e300;  // smallest (log p + 3 SE) - ELBO, nats
  for (int c = 0; c < 20; ++c) {
    std::vector<std::string> ctx;
    const std::size_t n = 1 + rng.index(3);
    for (std::size_t u = 0; u < n; ++u) ctx.push_back(words[rng.index(words.size())] + " " + words[rng.index(words.size())]);
    const std::size_t rid = rng.index(5);
    const auto m = oracle::importance_marginal(e, ctx, rid, 100000, rng);
    nn::Rng noise(100 + c);
    const auto est = e.elbo_estimate(ctx, rid, noise);
    const double s = m.log_p + 3.0 * m.standard_error - est.elbo;
    slack = std::min(slack, s);
    held += s >= 0.0;
  }
  return {held == 20, fmt("%.0f/20 contexts with ELBO <= log p + 3 SE; smallest slack %.3f nats", held, slack)};
}

// ---------------------------------------------------------------------------

Outcome determinism() {
  auto& l = lab();
  std::vector<std::string> fails;
  // Whole experiment, repeated.
  const auto& first = l.from_scratch(1);
  harness::Corpora fresh(l.cfg);
  const auto second = harness::run_from_scratch(1, l.cfg, fresh);
  if (!same_row(first.train, second.train) || !same_row(first.test, second.test)) fails.push_back("from-scratch metrics");
  if (first.curve.fractions != second.curve.fractions) fails.push_back("intervention curve");
  if (checkpoint_bytes(*first.engine) != checkpoint_bytes(*second.engine)) fails.push_back("trained parameters");

  // A neural baseline, repeated.
  auto bcfg = l.cfg;
  bcfg.baseline.max_epochs = 1;
  const auto b1 = harness::run_baseline_cross_tier(baselines::Kind::kMemN2N, 1, 2, bcfg, l.corpora);
  const auto b2 = harness::run_baseline_cross_tier(baselines::Kind::kMemN2N, 1, 2, bcfg, fresh);
  if (!same_row(b1, b2)) fails.push_back("baseline metrics");

  // Checkpoint file round trip, then identical continuation.
  const fs::path a = fs::temp_directory_path() / "ids_acceptance_a.ckpt";
  const fs::path b = fs::temp_directory_path() / "ids_acceptance_b.ckpt";
  auto original = harness::clone(*first.engine);
  original->save(a);
  auto restored = core::IdsEngine::load(a, &original->pool().records());
  restored->save(b);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  const std::string ba((std::istreambuf_iterator<char>(fa)), {}), bb((std::istreambuf_iterator<char>(fb)), {});
  if (ba.empty() || ba != bb) fails.push_back("checkpoint bytes");
  harness::MetricsRow ra, rb;
  std::int64_t ca = 0, cb = 0;
  const auto& valid = l.corpora.tier(2).valid;
  harness::stream_dialogues(*original, valid, ra, {true, nullptr, &ca});
  harness::stream_dialogues(*restored, valid, rb, {true, nullptr, &cb});
  if (!same_row(ra, rb) || checkpoint_bytes(*original) != checkpoint_bytes(*restored))
    fails.push_back("resumed stream");
  fs::remove(a);
  fs::remove(b);

  std::string d = fmt("from-scratch SubD1 twice, MemN2N twice, checkpoint %.0f bytes reloaded and resumed on %.0f turns",
                      static_cast<double>(ba.size()), static_cast<double>(ra.turns()));
  for (const auto& f : fails) d += "; differs: " + f;
  return {fails.empty(), d};
}

Outcome corpus_validity() {
  const auto& cfg = lab().cfg;
  std::vector<std::string> fails;
  std::size_t episodes = 0, replayed = 0;
  std::set<corpus::ScenarioKind> prev_kinds;
  std::set<std::string> prev_inventory;
  for (int t = 1; t <= 5; ++t) {
    const auto ds = corpus::generate(t, cfg.counts, cfg.corpus_seed);
    std::set<corpus::ScenarioKind> kinds;
    for (const auto& d : ds.train) kinds.insert(d.scenarios.begin(), d.scenarios.end());
    const auto legal = corpus::tier_scenarios(t);
    if (kinds != std::set<corpus::ScenarioKind>(legal.begin(), legal.end()))
      fails.push_back("SubD" + std::to_string(t) + " scenario kinds");
    if (t > 1 && !(kinds.size() > prev_kinds.size() &&
                   std::includes(kinds.begin(), kinds.end(), prev_kinds.begin(), prev_kinds.end())))
      fails.push_back("scenario nesting at SubD" + std::to_string(t));
    const auto canon = corpus::canonical_inventory(t);
    const std::set<std::string> inventory(canon.begin(), canon.end());
    // Inventories may stay flat between tiers; they must never lose a response.
    if (t > 1 && !std::includes(inventory.begin(), inventory.end(), prev_inventory.begin(), prev_inventory.end()))
      fails.push_back("inventory nesting at SubD" + std::to_string(t));
    for (const auto* split : {&ds.train, &ds.valid, &ds.test})
      for (const auto& d : *split) {
        ++episodes;
        replayed += corpus::replay(d).consistent && corpus::replay(corpus::normalize_entities(d)).consistent;
      }
    for (const auto& r : corpus::response_inventory(corpus::normalize_all(ds.train)))
      if (!inventory.count(r)) fails.push_back("SubD" + std::to_string(t) + " response outside inventory: " + r);
    prev_kinds = kinds;
    prev_inventory = inventory;
  }
  if (replayed != episodes) fails.push_back("replay");
  std::string d = fmt("scenario kinds nest strictly and inventories nest over 5 tiers; self-replay %.0f/%.0f episodes",
                      static_cast<double>(replayed), static_cast<double>(episodes));
  for (const auto& f : fails) d += "; " + f;
  return {fails.empty(), d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"divergence-oracle", divergence_oracle},
      {"gradient-suite", gradient_suite},
      {"elbo-bound", elbo_bound},
      {"corpus-validity", corpus_validity},
      {"determinism", determinism},
      {"rejection-orderings", rejection_orderings},
      {"intervention-decay", intervention_decay},
      {"from-scratch-subd1", from_scratch_subd1},
      {"cross-tier-robustness", cross_tier_robustness},
      {"online-adaptation", online_adaptation},
  };
  auto selected = [&](const std::string& name) {
    if (argc < 2) return true;
    for (int i = 1; i < argc; ++i)
      if (name.find(argv[i]) != std::string::npos) return true;
    return false;
  };
  int failed = 0, ran = 0;
  for (const auto& [name, run] : criteria) {
    if (!selected(name)) continue;
    ++ran;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail
              << fmt(" [%.1f min]", minutes_since(t0)) << std::endl;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
