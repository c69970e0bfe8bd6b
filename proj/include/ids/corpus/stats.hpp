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

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/corpus/normalize.hpp"
#include "ids/corpus/script.hpp"
#include "ids/corpus/types.hpp"

namespace ids::corpus {

struct SplitStats {
  std::size_t dialogues = 0;
  double scenarios_per_dialogue = 0;
  double utterances_per_dialogue = 0;
  double tokens_per_utterance = 0;
  double paraphrases_per_query = 0;
  std::size_t distinct_responses = 0;
  std::size_t min_scenarios = 0;
};

/// Mean surface variants per query intent (intent x attribute) in the
/// template inventory, counting explicit and ellipsis forms once.
inline double paraphrases_per_query() {
  std::map<std::pair<int, int>, std::size_t> per;
  for (const auto& t : templates()) {
    if (!is_emotable(t.intent)) continue;
    ++per[{static_cast<int>(t.intent), t.attribute ? static_cast<int>(*t.attribute) : -1}];
  }
  double total = 0;
  for (const auto& [k, n] : per) total += static_cast<double>(n);
  return per.empty() ? 0.0 : total / static_cast<double>(per.size());
}

/// Distinct system responses after entity normalization.
inline std::set<std::string> response_inventory(const std::vector<Dialogue>& split) {
  std::set<std::string> out;
  for (const auto& d : split)
    for (const auto& t : normalize_entities(d).turns) out.insert(t.system);
  return out;
}

inline SplitStats compute_stats(const std::vector<Dialogue>& split) {
  SplitStats s;
  s.dialogues = split.size();
  if (split.empty()) return s;
  std::size_t scenarios = 0, utterances = 0, tokens = 0;
  s.min_scenarios = split.front().scenarios.size();
  for (const auto& d : split) {
    scenarios += d.scenarios.size();
    s.min_scenarios = std::min(s.min_scenarios, d.scenarios.size());
    utterances += 2 * d.turns.size();
    for (const auto& t : d.turns) tokens += tokenize(t.user).size() + tokenize(t.system).size();
  }
  const double n = static_cast<double>(split.size());
  s.scenarios_per_dialogue = static_cast<double>(scenarios) / n;
  s.utterances_per_dialogue = static_cast<double>(utterances) / n;
  s.tokens_per_utterance = utterances ? static_cast<double>(tokens) / static_cast<double>(utterances) : 0.0;
  s.paraphrases_per_query = paraphrases_per_query();
  s.distinct_responses = response_inventory(split).size();
  return s;
}

inline nlohmann::json to_json(const SplitStats& s) {
  return {{"dialogues", s.dialogues},
          {"scenarios_per_dialogue", s.scenarios_per_dialogue},
          {"utterances_per_dialogue", s.utterances_per_dialogue},
          {"tokens_per_utterance", s.tokens_per_utterance},
          {"paraphrases_per_query", s.paraphrases_per_query},
          {"distinct_responses", s.distinct_responses},
          {"min_scenarios", s.min_scenarios}};
}

inline std::string format_stats_row(const std::string& label, const SplitStats& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-14s %9zu %10.2f %11.2f %12.2f %12.2f %10zu", label.c_str(), s.dialogues,
                s.scenarios_per_dialogue, s.utterances_per_dialogue, s.tokens_per_utterance, s.paraphrases_per_query,
                s.distinct_responses);
  return buf;
}

inline std::string stats_header() {
  return "split          dialogues  scen/dlg   utter/dlg   tokens/utt  paraphrases  responses";
}

}  // namespace ids::corpus
