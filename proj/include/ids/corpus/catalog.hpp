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

#include <array>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "ids/nn/rng.hpp"

namespace ids::corpus {

enum class Attribute { kPrice, kDiscount, kOs, kColor, kWeight, kScreen, kBattery, kNfc };

inline constexpr std::array<Attribute, 8> kAllAttributes = {
    Attribute::kPrice, Attribute::kDiscount, Attribute::kOs,      Attribute::kColor,
    Attribute::kWeight, Attribute::kScreen,  Attribute::kBattery, Attribute::kNfc,
};

/// Attributes that can be verified against a condition (tier 2+).
inline constexpr std::array<Attribute, 5> kVerifiableAttributes = {
    Attribute::kOs, Attribute::kColor, Attribute::kNfc, Attribute::kBattery, Attribute::kWeight,
};

/// Attributes with an ordering, usable in comparisons (tier 3+).
inline constexpr std::array<Attribute, 4> kComparableAttributes = {
    Attribute::kPrice, Attribute::kWeight, Attribute::kScreen, Attribute::kBattery,
};

inline std::string attribute_name(Attribute a) {
  switch (a) {
    case Attribute::kPrice: return "price";
    case Attribute::kDiscount: return "discount";
    case Attribute::kOs: return "os";
    case Attribute::kColor: return "color";
    case Attribute::kWeight: return "weight";
    case Attribute::kScreen: return "screen";
    case Attribute::kBattery: return "battery";
    case Attribute::kNfc: return "nfc";
  }
  return "?";
}

inline std::string entity_token(int index) { return "$entity_" + std::to_string(index) + "$"; }

inline bool is_raw_entity_token(const std::string& tok) {
  static const std::regex re(R"(\$entity_[0-9]+\$)");
  return std::regex_match(tok, re);
}

inline bool is_entity_order_token(const std::string& tok) {
  static const std::regex re(R"(\$entity_order_[0-9]+\$)");
  return std::regex_match(tok, re);
}

inline bool is_entity_token(const std::string& tok) {
  return tok.rfind("$entity_", 0) == 0 && (is_raw_entity_token(tok) || is_entity_order_token(tok));
}

struct Product {
  std::string id;  // anonymized token, e.g. "$entity_7$"
  std::map<std::string, std::string> attributes;
  double price = 0, weight = 0, screen = 0, battery = 0;
};

/// Fixed product catalog shared by every tier of a corpus.
class Catalog {
 public:
  static Catalog generate(std::size_t count, nn::Rng& rng) {
    static const std::array<const char*, 5> colors = {"black", "white", "red", "blue", "gold"};
    Catalog c;
    for (std::size_t i = 0; i < count; ++i) {
      Product p;
      p.id = entity_token(static_cast<int>(i + 1));
      p.price = 500.0 + 100.0 * static_cast<double>(rng.index(46));
      p.weight = 120.0 + 5.0 * static_cast<double>(rng.index(27));
      p.screen = 5.0 + 0.1 * static_cast<double>(rng.index(21));
      p.battery = 2500.0 + 100.0 * static_cast<double>(rng.index(31));
      p.attributes["price"] = std::to_string(static_cast<int>(p.price)) + " yuan";
      p.attributes["discount"] = rng.bernoulli(0.4) ? std::to_string(5 + 5 * rng.index(4)) + " percent off" : "none";
      p.attributes["os"] = rng.bernoulli(0.7) ? "android-compatible" : "other";
      p.attributes["color"] = colors[rng.index(colors.size())];
      p.attributes["weight"] = std::to_string(static_cast<int>(p.weight)) + " g";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f inches", p.screen);
      p.attributes["screen"] = buf;
      p.attributes["battery"] = std::to_string(static_cast<int>(p.battery)) + " mah";
      p.attributes["nfc"] = rng.bernoulli(0.5) ? "supported" : "not supported";
      c.products_.push_back(std::move(p));
    }
    return c;
  }

  std::size_t size() const { return products_.size(); }
  const std::vector<Product>& products() const { return products_; }
  const Product& operator[](std::size_t i) const { return products_.at(i); }

  const Product* find(const std::string& id) const {
    for (const auto& p : products_)
      if (p.id == id) return &p;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : products_) {
      j.push_back({{"id", p.id},
                   {"attributes", p.attributes},
                   {"price", p.price},
                   {"weight", p.weight},
                   {"screen", p.screen},
                   {"battery", p.battery}});
    }
    return j;
  }

  static Catalog from_json(const nlohmann::json& j) {
    Catalog c;
    for (const auto& e : j) {
      Product p;
      p.id = e.at("id");
      p.attributes = e.at("attributes").get<std::map<std::string, std::string>>();
      p.price = e.at("price");
      p.weight = e.at("weight");
      p.screen = e.at("screen");
      p.battery = e.at("battery");
      c.products_.push_back(std::move(p));
    }
    return c;
  }

 private:
  std::vector<Product> products_;
};

}  // namespace ids::corpus
