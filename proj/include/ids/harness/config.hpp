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

// Experiment configuration as a flat key = value text file. Every key has
// a default, so an empty file is a valid config. Unknown keys are errors.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ids/baselines/baseline.hpp"
#include "ids/core/engine.hpp"
#include "ids/corpus/generator.hpp"

namespace ids::harness {

inline constexpr corpus::SplitCounts kDeskScale{2000, 500, 500};
inline constexpr corpus::SplitCounts kFullScale{20000, 5000, 5000};

struct ExperimentConfig {
  core::IdsConfig ids;
  baselines::TrainConfig baseline;
  baselines::RankerConfig ranker;
  corpus::SplitCounts counts = kDeskScale;
  std::uint64_t corpus_seed = 7;
  std::string corpus_dir;  // empty: generate in memory from corpus_seed
  std::size_t window = 100;  // turns per intervention-curve point
  std::uint64_t seed = 1;    // drives the IDS and baseline seeds

  void set_seed(std::uint64_t s) {
    seed = s;
    ids.seed = s;
    baseline.seed = s;
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j = core::to_json(c.ids);
  j.erase("seed");
  j["seed"] = c.seed;
  j["corpus_seed"] = c.corpus_seed;
  j["corpus_dir"] = c.corpus_dir;
  j["train_dialogues"] = c.counts.train;
  j["valid_dialogues"] = c.counts.valid;
  j["test_dialogues"] = c.counts.test;
  j["window"] = c.window;
  j["baseline_max_epochs"] = c.baseline.max_epochs;
  j["baseline_patience"] = c.baseline.patience;
  j["baseline_batch_size"] = c.baseline.batch_size;
  j["baseline_learning_rate"] = c.baseline.learning_rate;
  nlohmann::json r = baselines::to_json(c.ranker);
  r.erase("vocab_size");  // taken from the corpus
  for (auto& [k, v] : r.items()) j["ranker_" + k] = v;
  return j;
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.ids = core::ids_config_from_json(j);
  c.set_seed(j.value("seed", c.seed));
  c.corpus_seed = j.value("corpus_seed", c.corpus_seed);
  c.corpus_dir = j.value("corpus_dir", c.corpus_dir);
  c.counts.train = j.value("train_dialogues", c.counts.train);
  c.counts.valid = j.value("valid_dialogues", c.counts.valid);
  c.counts.test = j.value("test_dialogues", c.counts.test);
  c.window = j.value("window", c.window);
  c.baseline.max_epochs = j.value("baseline_max_epochs", c.baseline.max_epochs);
  c.baseline.patience = j.value("baseline_patience", c.baseline.patience);
  c.baseline.batch_size = j.value("baseline_batch_size", c.baseline.batch_size);
  c.baseline.learning_rate = j.value("baseline_learning_rate", c.baseline.learning_rate);
  nlohmann::json r = baselines::to_json(c.ranker);
  for (auto& [k, v] : r.items())
    if (j.contains("ranker_" + k)) v = j.at("ranker_" + k);
  c.ranker = baselines::ranker_config_from_json(r);
  IDS_REQUIRE(c.window > 0, "window must be positive");
  IDS_REQUIRE(c.counts.train > 0 && c.counts.test > 0, "train and test splits must be non-empty");
  return c;
}

/// Sets one key from its text form; the type comes from the default value.
inline void apply_setting(nlohmann::json& j, const std::string& key, const std::string& text) {
  if (!j.contains(key)) throw ContractViolation("unknown config key '" + key + "'");
  nlohmann::json& slot = j[key];
  try {
    std::size_t used = 0;
    if (slot.is_boolean()) {
      if (text != "true" && text != "false") throw std::invalid_argument("bool");
      slot = text == "true";
      return;
    }
    if (slot.is_string()) {
      slot = text;
      return;
    }
    if (slot.is_number_unsigned()) {
      if (!text.empty() && text[0] == '-') throw std::invalid_argument("sign");
      slot = std::stoull(text, &used);
    } else if (slot.is_number_integer()) {
      slot = std::stoll(text, &used);
    } else {
      slot = std::stod(text, &used);
    }
    if (used != text.size()) throw std::invalid_argument("trailing");
  } catch (const std::logic_error&) {
    throw ContractViolation("bad value '" + text + "' for config key '" + key + "'");
  }
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Parses `key = value` lines on top of `base`. '#' starts a comment.
inline ExperimentConfig parse_config(const std::string& text, const ExperimentConfig& base = {}) {
  nlohmann::json j = to_json(base);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ContractViolation("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(j, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return experiment_config_from_json(j);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Renders the config in the file format, one key per line, sorted.
inline std::string render_config(const ExperimentConfig& c) {
  std::string out;
  const nlohmann::json j = to_json(c);
  for (auto& [k, v] : j.items()) {
    out += k + " = ";
    if (v.is_string()) {
      out += v.get<std::string>();
    } else {
      out += v.dump();  // shortest text that round-trips
    }
    out += "\n";
  }
  return out;
}

}  // namespace ids::harness
