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


// corpus generate --tier N --train X --valid Y --test Z --seed S --out DIR
// corpus stats DIR

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "ids/corpus/generator.hpp"
#include "ids/corpus/io.hpp"
#include "ids/corpus/stats.hpp"

namespace fs = std::filesystem;
using namespace ids;

namespace {

void print_stats(const fs::path& dir) {
  std::cout << "[" << dir.filename().string() << "]\n" << corpus::stats_header() << "\n";
  for (const char* split : {"train", "valid", "test"}) {
    const auto path = dir / (std::string(split) + ".jsonl");
    if (!fs::exists(path)) continue;
    std::cout << corpus::format_stats_row(split, corpus::compute_stats(corpus::read_jsonl(path))) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic customer-service dialogue corpus"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate one tier and write it under DIR/subdN");
  int tier = 1;
  corpus::SplitCounts counts;
  std::uint64_t seed = 7;
  std::string out;
  gen->add_option("--tier", tier, "difficulty tier")->required()->check(CLI::Range(1, 5));
  gen->add_option("--train", counts.train, "training dialogues")->capture_default_str();
  gen->add_option("--valid", counts.valid, "validation dialogues")->capture_default_str();
  gen->add_option("--test", counts.test, "test dialogues")->capture_default_str();
  gen->add_option("--seed", seed, "generator seed")->capture_default_str();
  gen->add_option("--out", out, "output root")->required();

  auto* stats = app.add_subcommand("stats", "per-split statistics of a corpus root or one tier directory");
  std::string dir;
  stats->add_option("DIR", dir)->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) {
      const auto ds = corpus::generate(tier, counts, seed);
      corpus::write_dataset(out, ds);
      std::cout << "wrote " << corpus::tier_dir(out, tier).string() << " (" << ds.train.size() << "/"
                << ds.valid.size() << "/" << ds.test.size() << " dialogues)\n";
    } else if (*stats) {
      const fs::path root(dir);
      if (fs::exists(root / "manifest.json")) {
        print_stats(root);
        return 0;
      }
      bool any = false;
      for (int t = 1; t <= 5; ++t) {
        if (!fs::exists(corpus::tier_dir(root, t) / "manifest.json")) continue;
        print_stats(corpus::tier_dir(root, t));
        any = true;
      }
      if (!any) {
        std::cerr << "no tier manifests under " << dir << "\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
