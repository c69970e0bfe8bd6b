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

namespace ids::core {

enum class Source { kOracle, kOperator };

inline const char* to_string(Source s) { return s == Source::kOracle ? "oracle" : "operator"; }

inline Source source_from_string(const std::string& s) {
  if (s == "oracle") return Source::kOracle;
  if (s == "operator") return Source::kOperator;
  throw std::invalid_argument("unknown intervention source '" + s + "'");
}

/// d_t = (C_t, r_t) plus bookkeeping.
struct InterventionRecord {
  std::vector<std::string> context;  // normalized utterances, ending with the user turn
  std::string response;
  std::size_t response_id = 0;
  bool novel = false;
  Source source = Source::kOracle;
  std::uint64_t sequence = 0;  // position in the pool
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const InterventionRecord&, const InterventionRecord&) = default;
};

inline nlohmann::json to_json(const InterventionRecord& r) {
  return {{"context", r.context},   {"response", r.response}, {"response_id", r.response_id},
          {"novel", r.novel},       {"source", to_string(r.source)}, {"sequence", r.sequence},
          {"timestamp_ms", r.timestamp_ms}};
}

inline InterventionRecord record_from_json(const nlohmann::json& j) {
  InterventionRecord r;
  r.context = j.at("context").get<std::vector<std::string>>();
  r.response = j.at("response").get<std::string>();
  r.response_id = j.at("response_id").get<std::size_t>();
  r.novel = j.at("novel").get<bool>();
  r.source = source_from_string(j.at("source").get<std::string>());
  r.sequence = j.at("sequence").get<std::uint64_t>();
  r.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
  return r;
}

/// In-memory training pool, optionally mirrored to an append-only JSONL file.
class DataPool {
 public:
  DataPool() = default;

  void attach_file(const std::filesystem::path& path) {
    sink_.open(path, std::ios::binary | std::ios::app);
    if (!sink_) throw std::runtime_error("cannot open pool file " + path.string());
  }

  const InterventionRecord& append(InterventionRecord r) {
    r.sequence = records_.size();
    records_.push_back(std::move(r));
    if (sink_.is_open()) {
      sink_ << to_json(records_.back()).dump() << '\n';
      sink_.flush();
      if (!sink_) throw std::runtime_error("failed appending to pool file");
    }
    return records_.back();
  }

  std::size_t size() const { return records_.size(); }
  const InterventionRecord& operator[](std::size_t i) const { return records_.at(i); }
  const std::vector<InterventionRecord>& records() const { return records_; }

  static std::vector<InterventionRecord> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read pool file " + path.string());
    std::vector<InterventionRecord> out;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) out.push_back(record_from_json(nlohmann::json::parse(line)));
    return out;
  }

 private:
  std::vector<InterventionRecord> records_;
  std::ofstream sink_;
};

}  // namespace ids::core
