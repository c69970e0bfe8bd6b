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

// Checkpoint container:
//
//   bytes 0..7    magic "IDSCKPT\n"
//   bytes 8..15   manifest length N, uint64 little-endian
//   next N bytes  manifest, UTF-8 JSON:
//                   { "format_version": 1,
//                     "tensors": [ {"name", "shape", "offset"}, ... ],
//                     "rng": "<engine state>",
//                     "adam": {"learning_rate", "beta1", "beta2", "epsilon", "step"},
//                     "extra": { ... } }
//   payload       float64 little-endian values; "offset" is the byte offset
//                 of a tensor's first value relative to the payload start.
//
// Adam moments are stored as tensors named "adam.m/<param>" and
// "adam.v/<param>".

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/nn/adam.hpp"
#include "ids/nn/parameters.hpp"
#include "ids/nn/rng.hpp"

namespace ids::nn {

inline constexpr int kCheckpointVersion = 1;
inline constexpr char kCheckpointMagic[8] = {'I', 'D', 'S', 'C', 'K', 'P', 'T', '\n'};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Checkpoint {
  std::vector<std::pair<std::string, Tensor>> tensors;
  std::optional<std::string> rng_state;
  std::optional<AdamState> adam;
  nlohmann::json extra = nlohmann::json::object();

  const Tensor* find(const std::string& name) const {
    for (const auto& [n, t] : tensors)
      if (n == name) return &t;
    return nullptr;
  }
};

namespace detail {

inline std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char*>(&v), 8);
}

inline std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  if (!is) throw CheckpointError("truncated checkpoint");
  return to_le(v);
}

}  // namespace detail

inline Checkpoint make_checkpoint(const ParameterStore& params, const AdamState* adam = nullptr,
                                  const Rng* rng = nullptr) {
  Checkpoint ck;
  for (const auto& p : params) ck.tensors.emplace_back(p->name, p->value);
  if (adam) {
    AdamState meta = *adam;
    meta.moments.clear();
    ck.adam = meta;
    for (const auto& [name, mom] : adam->moments) {
      ck.tensors.emplace_back("adam.m/" + name, mom.first);
      ck.tensors.emplace_back("adam.v/" + name, mom.second);
    }
  }
  if (rng) ck.rng_state = rng->state();
  return ck;
}

/// Copies checkpointed values into `params` (and optionally Adam / RNG).
/// Every parameter in the store must be present with a matching shape.
inline void restore_checkpoint(const Checkpoint& ck, ParameterStore& params, AdamState* adam = nullptr,
                               Rng* rng = nullptr) {
  for (auto& p : params) {
    const Tensor* t = ck.find(p->name);
    if (!t) throw CheckpointError("checkpoint is missing parameter '" + p->name + "'");
    if (t->shape() != p->value.shape())
      throw CheckpointError("shape mismatch for '" + p->name + "': checkpoint " + shape_str(t->shape()) +
                            ", model " + shape_str(p->value.shape()));
    p->value = *t;
    p->grad = Tensor(p->value.shape());
  }
  if (adam) {
    if (!ck.adam) throw CheckpointError("checkpoint has no optimizer state");
    *adam = *ck.adam;
    adam->moments.clear();
    for (const auto& [name, t] : ck.tensors) {
      if (name.rfind("adam.m/", 0) == 0) adam->moments[name.substr(7)].first = t;
      if (name.rfind("adam.v/", 0) == 0) adam->moments[name.substr(7)].second = t;
    }
  }
  if (rng) {
    if (!ck.rng_state) throw CheckpointError("checkpoint has no RNG state");
    rng->set_state(*ck.rng_state);
  }
}

inline nlohmann::json checkpoint_manifest(const Checkpoint& ck) {
  nlohmann::json m;
  m["format_version"] = kCheckpointVersion;
  auto& list = m["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, t] : ck.tensors) {
    list.push_back({{"name", name}, {"shape", t.shape()}, {"offset", offset}});
    offset += 8 * t.size();
  }
  if (ck.rng_state) m["rng"] = *ck.rng_state;
  if (ck.adam) {
    m["adam"] = {{"learning_rate", ck.adam->learning_rate},
                 {"beta1", ck.adam->beta1},
                 {"beta2", ck.adam->beta2},
                 {"epsilon", ck.adam->epsilon},
                 {"step", ck.adam->step}};
  }
  m["extra"] = ck.extra;
  return m;
}

inline void write_checkpoint(std::ostream& os, const Checkpoint& ck) {
  const std::string manifest = checkpoint_manifest(ck).dump();
  os.write(kCheckpointMagic, 8);
  detail::write_u64(os, manifest.size());
  os.write(manifest.data(), static_cast<std::streamsize>(manifest.size()));
  for (const auto& [name, t] : ck.tensors) {
    for (double v : t.values()) detail::write_u64(os, std::bit_cast<std::uint64_t>(v));
  }
  if (!os) throw CheckpointError("failed writing checkpoint");
}

/// Writes to a sibling temporary file and renames it into place.
inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError("cannot open '" + tmp.string() + "' for writing");
    write_checkpoint(os, ck);
    os.flush();
    if (!os) throw CheckpointError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError("cannot move checkpoint into place: " + ec.message());
}

inline Checkpoint read_checkpoint(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kCheckpointMagic, 8) != 0) throw CheckpointError("not a checkpoint file");
  const std::uint64_t len = detail::read_u64(is);
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  if (!is) throw CheckpointError("truncated checkpoint manifest");
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint manifest: ") + e.what());
  }
  if (m.value("format_version", 0) != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + m.value("format_version", nlohmann::json()).dump());

  Checkpoint ck;
  std::uint64_t expected_offset = 0;
  for (const auto& entry : m.at("tensors")) {
    Shape shape = entry.at("shape").get<Shape>();
    if (entry.at("offset").get<std::uint64_t>() != expected_offset)
      throw CheckpointError("non-contiguous payload for '" + entry.at("name").get<std::string>() + "'");
    std::vector<double> values(shape_size(shape));
    for (auto& v : values) v = std::bit_cast<double>(detail::read_u64(is));
    expected_offset += 8 * values.size();
    ck.tensors.emplace_back(entry.at("name").get<std::string>(), Tensor(std::move(shape), std::move(values)));
  }
  if (m.contains("rng")) ck.rng_state = m["rng"].get<std::string>();
  if (m.contains("adam")) {
    AdamState a;
    a.learning_rate = m["adam"].at("learning_rate");
    a.beta1 = m["adam"].at("beta1");
    a.beta2 = m["adam"].at("beta2");
    a.epsilon = m["adam"].at("epsilon");
    a.step = m["adam"].at("step");
    ck.adam = a;
  }
  if (m.contains("extra")) ck.extra = m["extra"];
  return ck;
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CheckpointError("cannot open '" + path.string() + "'");
  return read_checkpoint(is);
}

}  // namespace ids::nn
