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

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ids/corpus/types.hpp"
#include "ids/nn/tensor.hpp"

namespace ids::core {

/// Append-only inventory of normalized responses. Ids are insertion
/// indices and are never reused.
class ResponseSet {
 public:
  struct Added {
    std::size_t id;
    bool novel;
  };

  /// Adds `text` unless an identical normalized string is present.
  Added add(const std::string& text) {
    std::string norm = corpus::join(corpus::tokenize(text));
    IDS_REQUIRE(!norm.empty(), "response text must be non-empty");
    if (auto it = index_.find(norm); it != index_.end()) return {it->second, false};
    const std::size_t id = texts_.size();
    texts_.push_back(norm);
    created_.push_back(next_seq_++);
    index_.emplace(std::move(norm), id);
    return {id, true};
  }

  std::optional<std::size_t> find(const std::string& text) const {
    auto it = index_.find(corpus::join(corpus::tokenize(text)));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return texts_.size(); }
  bool empty() const { return texts_.empty(); }
  const std::string& text(std::size_t id) const { return texts_.at(id); }
  const std::vector<std::string>& texts() const { return texts_; }
  /// Logical creation stamp (insertion sequence number).
  std::uint64_t created(std::size_t id) const { return created_.at(id); }

 private:
  std::vector<std::string> texts_;
  std::vector<std::uint64_t> created_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace ids::core
