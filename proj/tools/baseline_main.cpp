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


// baseline train --kind K --tier I --out FILE
// baseline eval --model FILE --tier J [--split test]

#include <iostream>

#include "cli_common.hpp"
#include "ids/harness/experiment.hpp"

using namespace ids;

int main(int argc, char** argv) {
  CLI::App app{"Retrieval baselines: ir, sem, dlstm, memn2n"};
  app.require_subcommand(1);
  tools::CommonOptions common;
  add_common(app, common);

  auto* train = app.add_subcommand("train", "train on a tier's train split, early-stopping on its valid split");
  std::string kind;
  int tier = 1;
  std::string out;
  train->add_option("--kind", kind, "model kind")->required()->check(CLI::IsMember({"ir", "sem", "dlstm", "memn2n"}));
  train->add_option("--tier", tier, "training tier")->check(CLI::Range(1, 5))->capture_default_str();
  train->add_option("--out", out, "model file")->required();

  auto* eval = app.add_subcommand("eval", "accuracy on a tier's split");
  std::string model_path;
  int eval_tier = 1;
  std::string split = "test";
  int label_tier = 0;
  std::string csv;
  eval->add_option("--train-tier", label_tier, "tier the model was trained on, for the report (default: --tier)");
  eval->add_option("--model", model_path, "model file from 'baseline train'")->required()->check(CLI::ExistingFile);
  eval->add_option("--tier", eval_tier, "evaluation tier")->check(CLI::Range(1, 5))->capture_default_str();
  eval->add_option("--split", split)->check(CLI::IsMember({"train", "valid", "test"}))->capture_default_str();
  eval->add_option("--csv", csv, "also write the metrics row as CSV");

  CLI11_PARSE(app, argc, argv);
  try {
    const auto cfg = tools::resolve(common);
    harness::Corpora corpora(cfg);
    if (*train) {
      const auto& ds = corpora.tier(tier);
      const auto& vocab = corpora.vocab();
      const auto inventory = baselines::Inventory::from_dialogues(ds.train);
      const auto examples = baselines::make_examples(ds.train, inventory, vocab);
      const auto valid = baselines::make_examples(ds.valid, inventory, vocab);
      auto model = baselines::train_baseline(
          baselines::kind_from_name(kind), examples, inventory, vocab, cfg.baseline, valid.empty() ? nullptr : &valid,
          cfg.ranker, [&](const baselines::EpochLog& log) {
            if (common.verbose)
              std::cerr << "epoch " << log.epoch << " loss " << log.train_loss << " valid " << log.valid_accuracy
                        << std::endl;
          });
      model.save(out);
      std::cout << kind << " on SubD" << tier << ": valid accuracy " << model.accuracy(valid) << ", saved " << out
                << "\n";
    } else if (*eval) {
      const auto model = baselines::Baseline::load(model_path);
      const auto& ds = corpora.tier(eval_tier);
      const auto& dialogues = split == "train" ? ds.train : split == "valid" ? ds.valid : ds.test;
      const auto examples = baselines::make_examples(dialogues, model.inventory(), model.vocab());
      harness::MetricsRow row{baselines::kind_name(model.kind()), label_tier ? label_tier : eval_tier, eval_tier};
      row.answered = examples.size();
      row.correct = model.count_correct(examples);
      std::cout << harness::render_table({row});
      if (!csv.empty()) {
        auto os = tools::open_output(csv);
        harness::write_csv(os, {row});
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
