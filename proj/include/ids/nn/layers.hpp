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

#include <string>

#include "ids/nn/parameters.hpp"
#include "ids/nn/tape.hpp"

namespace ids::nn {

/// Gated recurrent unit (Cho et al. formulation):
///   z = sigmoid(Wz x + Uz h + bz)        update gate
///   r = sigmoid(Wr x + Ur h + br)        reset gate
///   n = tanh(Wn x + Un (r * h) + bn)     candidate
///   h' = (1 - z) * n + z * h
/// Input weights are packed as [z; r; n] rows.
struct GruCell {
  Parameter* w_input = nullptr;   // (3H x I)
  Parameter* w_gates = nullptr;   // (2H x H), [z; r]
  Parameter* w_cand = nullptr;    // (H x H)
  Parameter* bias = nullptr;      // (3H)
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;

  static GruCell create(ParameterStore& store, const std::string& prefix, std::size_t input,
                        std::size_t hidden, Rng& rng, double scale = kInitScale) {
    GruCell cell;
    cell.input_size = input;
    cell.hidden_size = hidden;
    cell.w_input = &store.add_uniform(prefix + ".w_input", {3 * hidden, input}, rng, scale);
    cell.w_gates = &store.add_uniform(prefix + ".w_gates", {2 * hidden, hidden}, rng, scale);
    cell.w_cand = &store.add_uniform(prefix + ".w_cand", {hidden, hidden}, rng, scale);
    cell.bias = &store.add_zeros(prefix + ".bias", {3 * hidden});
    return cell;
  }

  static GruCell bind(ParameterStore& store, const std::string& prefix) {
    GruCell cell;
    cell.w_input = &store.get(prefix + ".w_input");
    cell.w_gates = &store.get(prefix + ".w_gates");
    cell.w_cand = &store.get(prefix + ".w_cand");
    cell.bias = &store.get(prefix + ".bias");
    cell.hidden_size = cell.w_cand->value.rows();
    cell.input_size = cell.w_input->value.cols();
    return cell;
  }

  Var step(Tape& t, Var prev_hidden, Var input) const {
    IDS_REQUIRE(t.value(input).size() == input_size, "gru_step: input has ", t.value(input).size(),
                " entries, cell expects ", input_size);
    IDS_REQUIRE(t.value(prev_hidden).size() == hidden_size, "gru_step: hidden has ",
                t.value(prev_hidden).size(), " entries, cell expects ", hidden_size);
    const std::size_t h = hidden_size;
    Var b = t.param(*bias);
    Var wx = t.matvec(t.param(*w_input), input);
    Var uh = t.matvec(t.param(*w_gates), prev_hidden);
    Var gates = t.sigmoid(t.add(t.add(t.slice(wx, 0, 2 * h), uh), t.slice(b, 0, 2 * h)));
    Var update = t.slice(gates, 0, h);
    Var reset = t.slice(gates, h, h);
    Var cand_pre = t.add(t.add(t.slice(wx, 2 * h, h), t.matvec(t.param(*w_cand), t.mul(reset, prev_hidden))),
                         t.slice(b, 2 * h, h));
    Var cand = t.tanh(cand_pre);
    return t.add(t.mul(t.one_minus(update), cand), t.mul(update, prev_hidden));
  }
};

/// Long short-term memory cell, gates packed as [i; f; o; g].
struct LstmCell {
  Parameter* w_input = nullptr;   // (4H x I)
  Parameter* w_hidden = nullptr;  // (4H x H)
  Parameter* bias = nullptr;      // (4H)
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;

  struct State {
    Var hidden;
    Var cell;
  };

  static LstmCell create(ParameterStore& store, const std::string& prefix, std::size_t input,
                         std::size_t hidden, Rng& rng, double scale = kInitScale) {
    LstmCell cell;
    cell.input_size = input;
    cell.hidden_size = hidden;
    cell.w_input = &store.add_uniform(prefix + ".w_input", {4 * hidden, input}, rng, scale);
    cell.w_hidden = &store.add_uniform(prefix + ".w_hidden", {4 * hidden, hidden}, rng, scale);
    cell.bias = &store.add_zeros(prefix + ".bias", {4 * hidden});
    return cell;
  }

  State zero_state(Tape& t) const {
    return {t.constant(std::vector<double>(hidden_size, 0.0)), t.constant(std::vector<double>(hidden_size, 0.0))};
  }

  State step(Tape& t, State prev, Var input) const {
    IDS_REQUIRE(t.value(input).size() == input_size, "lstm_step: input size mismatch");
    const std::size_t h = hidden_size;
    Var pre = t.add(t.add(t.matvec(t.param(*w_input), input), t.matvec(t.param(*w_hidden), prev.hidden)),
                    t.param(*bias));
    Var ifo = t.sigmoid(t.slice(pre, 0, 3 * h));
    Var g = t.tanh(t.slice(pre, 3 * h, h));
    Var c = t.add(t.mul(t.slice(ifo, h, h), prev.cell), t.mul(t.slice(ifo, 0, h), g));
    Var out = t.mul(t.slice(ifo, 2 * h, h), t.tanh(c));
    return {out, c};
  }
};

/// One hidden tanh layer followed by a linear head.
struct Mlp {
  Parameter* w1 = nullptr;
  Parameter* b1 = nullptr;
  Parameter* w2 = nullptr;
  Parameter* b2 = nullptr;

  static Mlp create(ParameterStore& store, const std::string& prefix, std::size_t input,
                    std::size_t hidden, std::size_t output, Rng& rng, double scale = kInitScale) {
    Mlp m;
    m.w1 = &store.add_uniform(prefix + ".w1", {hidden, input}, rng, scale);
    m.b1 = &store.add_zeros(prefix + ".b1", {hidden});
    m.w2 = &store.add_uniform(prefix + ".w2", {output, hidden}, rng, scale);
    m.b2 = &store.add_zeros(prefix + ".b2", {output});
    return m;
  }

  static Mlp bind(ParameterStore& store, const std::string& prefix) {
    return {&store.get(prefix + ".w1"), &store.get(prefix + ".b1"), &store.get(prefix + ".w2"),
            &store.get(prefix + ".b2")};
  }

  std::size_t input_size() const { return w1->value.cols(); }
  std::size_t output_size() const { return w2->value.rows(); }

  Var forward(Tape& t, Var x) const {
    IDS_REQUIRE(t.value(x).size() == input_size(), "mlp: input has ", t.value(x).size(), " entries, expects ",
                input_size());
    Var hidden = t.tanh(t.affine(t.param(*w1), x, t.param(*b1)));
    return t.affine(t.param(*w2), hidden, t.param(*b2));
  }
};

}  // namespace ids::nn
