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


// harness config | cross-tier | from-scratch | export-emb

#include <iostream>

#include "cli_common.hpp"
#include "ids/harness/experiment.hpp"

using namespace ids;

namespace {

void write_pool(const std::string& path, const core::IdsEngine& engine) {
  auto os = tools::open_output(path);
  for (const auto& r : engine.pool().records()) os << core::to_json(r).dump() << '\n';
}

void report(const std::vector<harness::MetricsRow>& rows, const std::string& csv) {
  std::cout << harness::render_table(rows);
  if (csv.empty()) return;
  auto os = tools::open_output(csv);
  harness::write_csv(os, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiment harness"};
  app.require_subcommand(1);
  tools::CommonOptions common;
  add_common(app, common);

  auto* config = app.add_subcommand("config", "print the resolved configuration as a config file");

  auto* cross = app.add_subcommand("cross-tier", "train on one tier, test on another");
  std::vector<std::string> models;
  int train_tier = 1, test_tier = 5;
  std::string csv;
  std::vector<std::string> choices = harness::model_names();
  choices.push_back("all");
  cross->add_option("--model", models, "ir, sem, dlstm, memn2n, ids-, ids or all (repeatable)")
      ->required()
      ->check(CLI::IsMember(choices));
  cross->add_option("--train-tier", train_tier)->check(CLI::Range(1, 5))->capture_default_str();
  cross->add_option("--test-tier", test_tier)->check(CLI::Range(1, 5))->capture_default_str();
  cross->add_option("--csv", csv, "also write rows as CSV");

  auto* scratch = app.add_subcommand("from-scratch", "stream a tier's train split with oracle help, test frozen");
  int tier = 1;
  std::string curve_path, checkpoint_path, pool_path, scratch_csv;
  scratch->add_option("--tier", tier)->check(CLI::Range(1, 5))->capture_default_str();
  scratch->add_option("--csv", scratch_csv, "also write train and test rows as CSV");
  scratch->add_option("--curve", curve_path, "escalation fraction per window, CSV");
  scratch->add_option("--checkpoint", checkpoint_path, "save the trained engine");
  scratch->add_option("--pool", pool_path, "save the intervention pool (JSON lines)");

  auto* emb = app.add_subcommand("export-emb", "context vectors with sure/unsure labels, JSON lines");
  int emb_tier = 1;
  std::string split = "test", out, from_checkpoint, from_pool;
  emb->add_option("--tier", emb_tier, "tier to train on (unless --checkpoint) and to export")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  emb->add_option("--split", split)->check(CLI::IsMember({"train", "valid", "test"}))->capture_default_str();
  emb->add_option("--out", out, "output file")->required();
  emb->add_option("--checkpoint", from_checkpoint, "engine to export from instead of training")
      ->check(CLI::ExistingFile);
  emb->add_option("--pool", from_pool, "pool file of that engine")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    const auto cfg = tools::resolve(common);
    const auto progress = tools::progress_printer(common);
    if (*config) {
      std::cout << harness::render_config(cfg);
      return 0;
    }
    harness::Corpora corpora(cfg);
    if (*cross) {
      bool all = std::find(models.begin(), models.end(), "all") != models.end();
      auto wants = [&](const std::string& m) {
        return all || std::find(models.begin(), models.end(), m) != models.end();
      };
      std::vector<harness::MetricsRow> rows;
      for (const char* m : {"ir", "sem", "dlstm", "memn2n"})
        if (wants(m)) rows.push_back(harness::run_cross_tier(m, train_tier, test_tier, cfg, corpora, progress));
      // Both IDS rows come from one training stream.
      if (wants("ids-") || wants("ids")) {
        const auto r = harness::run_ids_cross_tier(train_tier, test_tier, cfg, corpora, progress);
        if (wants("ids-")) rows.push_back(r.frozen);
        if (wants("ids")) rows.push_back(r.online);
      }
      report(rows, csv);
    } else if (*scratch) {
      const auto r = harness::run_from_scratch(tier, cfg, corpora, progress);
      report({r.train, r.test}, scratch_csv);
      std::cout << "escalations: first 10% of windows " << r.curve.head_mean() << ", last 10% "
                << r.curve.tail_mean() << " (" << r.curve.fractions.size() << " windows of " << r.curve.window
                << " turns)\n";
      if (!curve_path.empty()) {
        auto os = tools::open_output(curve_path);
        harness::write_csv(os, r.curve);
      }
      if (!checkpoint_path.empty()) r.engine->save(checkpoint_path);
      if (!pool_path.empty()) write_pool(pool_path, *r.engine);
    } else if (*emb) {
      std::unique_ptr<core::IdsEngine> engine;
      if (!from_checkpoint.empty()) {
        std::vector<core::InterventionRecord> pool;
        if (!from_pool.empty()) pool = core::DataPool::read_file(from_pool);
        engine = core::IdsEngine::load(from_checkpoint, &pool);
      } else {
        engine = harness::run_from_scratch(emb_tier, cfg, corpora, progress).engine;
      }
      const auto& ds = corpora.tier(emb_tier);
      const auto& dialogues = split == "train" ? ds.train : split == "valid" ? ds.valid : ds.test;
      const auto n = harness::export_embeddings(*engine, dialogues, out);
      std::cout << "wrote " << n << " records to " << out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
