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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/corpus/generator.hpp"
#include "ids/corpus/stats.hpp"
#include "ids/corpus/vocab.hpp"

namespace ids::corpus {

namespace fs = std::filesystem;

inline fs::path tier_dir(const fs::path& root, int tier) { return root / ("subd" + std::to_string(tier)); }

inline void write_jsonl(const fs::path& path, const std::vector<Dialogue>& split) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& d : split) out << to_json(d).dump() << '\n';
}

inline std::vector<Dialogue> read_jsonl(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<Dialogue> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(dialogue_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline nlohmann::json make_manifest(const Dataset& ds) {
  nlohmann::json m;
  m["tier"] = ds.tier;
  m["seed"] = ds.seed;
  m["counts"] = {{"train", ds.train.size()}, {"valid", ds.valid.size()}, {"test", ds.test.size()}};
  m["scenarios"] = nlohmann::json::array();
  for (auto k : tier_scenarios(ds.tier)) m["scenarios"].push_back(std::string(to_string(k)));
  m["response_inventory"] = canonical_inventory(ds.tier);
  m["vocab"] = build_vocab(normalize_all(ds.train)).to_json();
  m["stats"] = {{"train", to_json(compute_stats(ds.train))},
                {"valid", to_json(compute_stats(ds.valid))},
                {"test", to_json(compute_stats(ds.test))}};
  return m;
}

/// Writes DIR/catalog.json and DIR/subdN/{train,valid,test}.jsonl plus
/// DIR/subdN/manifest.json.
inline void write_dataset(const fs::path& root, const Dataset& ds) {
  fs::create_directories(tier_dir(root, ds.tier));
  {
    std::ofstream out(root / "catalog.json", std::ios::binary);
    out << ds.catalog.to_json().dump(1) << '\n';
  }
  const fs::path dir = tier_dir(root, ds.tier);
  write_jsonl(dir / "train.jsonl", ds.train);
  write_jsonl(dir / "valid.jsonl", ds.valid);
  write_jsonl(dir / "test.jsonl", ds.test);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << make_manifest(ds).dump(1) << '\n';
}

inline nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

inline Dataset read_dataset(const fs::path& root, int tier) {
  require_tier(tier);
  Dataset ds;
  ds.tier = tier;
  const fs::path dir = tier_dir(root, tier);
  const auto manifest = read_json_file(dir / "manifest.json");
  ds.seed = manifest.at("seed").get<std::uint64_t>();
  ds.catalog = Catalog::from_json(read_json_file(root / "catalog.json"));
  ds.train = read_jsonl(dir / "train.jsonl");
  ds.valid = read_jsonl(dir / "valid.jsonl");
  ds.test = read_jsonl(dir / "test.jsonl");
  return ds;
}

}  // namespace ids::corpus
