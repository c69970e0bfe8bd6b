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

// Options shared by the experiment tools: config file, seed, scale, corpus.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "ids/harness/config.hpp"

namespace ids::tools {

struct CommonOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool full_scale = false;
  std::string corpus_dir;
  std::uint64_t corpus_seed = 0;
  bool verbose = false;
};

inline void add_common(CLI::App& app, CommonOptions& o) {
  app.add_option("--config", o.config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t s) { o.seed = s; o.seed_set = true; },
                                         "model and training seed");
  app.add_flag("--full-scale", o.full_scale, "20000/5000/5000 dialogues per tier instead of 2000/500/500");
  app.add_option("--corpus-dir", o.corpus_dir, "read tiers written by 'corpus generate' instead of generating");
  app.add_option("--corpus-seed", o.corpus_seed, "generator seed when no corpus dir is given");
  app.add_flag("-v,--verbose", o.verbose, "progress on stderr");
}

/// Config file first, then command-line overrides.
inline harness::ExperimentConfig resolve(const CommonOptions& o) {
  harness::ExperimentConfig c = o.config_path.empty() ? harness::ExperimentConfig{} : harness::load_config(o.config_path);
  if (o.full_scale) c.counts = harness::kFullScale;
  if (o.seed_set) c.set_seed(o.seed);
  if (!o.corpus_dir.empty()) c.corpus_dir = o.corpus_dir;
  if (o.corpus_seed != 0) c.corpus_seed = o.corpus_seed;
  return c;
}

inline std::function<void(const std::string&)> progress_printer(const CommonOptions& o) {
  if (!o.verbose) return {};
  return [](const std::string& msg) { std::cerr << msg << std::endl; };
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  return os;
}

}  // namespace ids::tools
