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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "ids/nn/parameters.hpp"
#include "ids/nn/tensor.hpp"

namespace ids::nn {

/// Handle to a value recorded on a Tape.
struct Var {
  std::uint32_t id = UINT32_MAX;
  bool valid() const { return id != UINT32_MAX; }
};

/// Read-only view of a node value. Vectors are (n x 1).
struct View {
  const double* ptr = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  double operator[](std::size_t i) const { return ptr[i]; }
  double at(std::size_t r, std::size_t c) const { return ptr[r * cols + c]; }
  std::span<const double> span() const { return {ptr, size()}; }
  std::vector<double> to_vector() const { return {ptr, ptr + size()}; }
  double scalar() const { return ptr[0]; }
};

/// Records primitive operations for one forward pass and replays them in
/// reverse to accumulate gradients into the bound Parameters. Nodes are
/// appended in evaluation order, so reverse index order is a valid reverse
/// topological order.
class Tape {
 public:
  Tape() { nodes_.reserve(1024); }
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  std::size_t node_count() const { return nodes_.size(); }

  View value(Var v) const {
    const Node& n = nodes_.at(v.id);
    if (n.param) return {n.param->value.data(), n.rows, n.cols};
    return {n.value.data(), n.rows, n.cols};
  }
  double scalar(Var v) const { return value(v).scalar(); }

  /// Gradient of the last backward() root w.r.t. a node (zeros if unused).
  std::vector<double> grad(Var v) const {
    const Node& n = nodes_.at(v.id);
    if (n.grad.empty()) return std::vector<double>(n.rows * n.cols, 0.0);
    return n.grad;
  }

  // ---- leaves --------------------------------------------------------------

  Var param(Parameter& p) {
    auto it = param_nodes_.find(&p);
    if (it != param_nodes_.end()) return Var{it->second};
    Node n;
    n.op = Op::Param;
    n.param = &p;
    n.rows = p.value.rows();
    n.cols = p.value.cols();
    n.requires_grad = true;
    Var v = push(std::move(n));
    param_nodes_[&p] = v.id;
    return v;
  }

  Var constant(std::vector<double> values, std::size_t rows, std::size_t cols) {
    IDS_REQUIRE(values.size() == rows * cols, "constant: size mismatch");
    Node n;
    n.op = Op::Leaf;
    n.value = std::move(values);
    n.rows = rows;
    n.cols = cols;
    return push(std::move(n));
  }
  Var constant(std::vector<double> values) {
    const std::size_t n = values.size();
    return constant(std::move(values), n, 1);
  }
  Var constant(std::span<const double> values) {
    return constant(std::vector<double>(values.begin(), values.end()));
  }
  Var constant(const Tensor& t) { return constant(t.values(), t.rows(), t.cols()); }

  /// Row `index` of an embedding matrix, as a vector.
  Var row(Parameter& table, std::size_t index) {
    IDS_REQUIRE(index < table.value.rows(), "embedding row ", index, " out of range ", table.value.rows());
    const std::size_t cols = table.value.cols();
    Node n;
    n.op = Op::Row;
    n.param = nullptr;
    n.table = &table;
    n.aux = index;
    n.rows = cols;
    n.cols = 1;
    auto r = table.value.row(index);
    n.value.assign(r.begin(), r.end());
    n.requires_grad = true;
    return push(std::move(n));
  }

  // ---- linear algebra ------------------------------------------------------

  /// M x, M is (r x c), x has c entries.
  Var matvec(Var m, Var x) {
    View M = value(m), X = value(x);
    IDS_REQUIRE(X.size() == M.cols, "matvec: matrix (", M.rows, ", ", M.cols, ") vs vector ", X.size());
    std::vector<double> out(M.rows, 0.0);
    for (std::size_t r = 0; r < M.rows; ++r) {
      const double* p = M.ptr + r * M.cols;
      double acc = 0.0;
      for (std::size_t c = 0; c < M.cols; ++c) acc += p[c] * X.ptr[c];
      out[r] = acc;
    }
    return push_op(Op::MatVec, {m, x}, std::move(out), M.rows, 1);
  }

  /// Mᵀ x, M is (r x c), x has r entries.
  Var matvec_t(Var m, Var x) {
    View M = value(m), X = value(x);
    IDS_REQUIRE(X.size() == M.rows, "matvec_t: matrix (", M.rows, ", ", M.cols, ") vs vector ", X.size());
    std::vector<double> out(M.cols, 0.0);
    for (std::size_t r = 0; r < M.rows; ++r) {
      const double xr = X.ptr[r];
      const double* p = M.ptr + r * M.cols;
      for (std::size_t c = 0; c < M.cols; ++c) out[c] += p[c] * xr;
    }
    return push_op(Op::MatVecT, {m, x}, std::move(out), M.cols, 1);
  }

  /// W x + b.
  Var affine(Var w, Var x, Var b) { return add(matvec(w, x), b); }

  Var dot(Var a, Var b) {
    View A = value(a), B = value(b);
    IDS_REQUIRE(A.size() == B.size(), "dot: length mismatch ", A.size(), " vs ", B.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) acc += A.ptr[i] * B.ptr[i];
    return push_op(Op::Dot, {a, b}, {acc}, 1, 1);
  }

  // ---- elementwise ---------------------------------------------------------

  Var add(Var a, Var b) { return binary(Op::Add, a, b, [](double x, double y) { return x + y; }); }
  Var sub(Var a, Var b) { return binary(Op::Sub, a, b, [](double x, double y) { return x - y; }); }
  Var mul(Var a, Var b) { return binary(Op::Mul, a, b, [](double x, double y) { return x * y; }); }

  Var scale(Var a, double s) {
    View A = value(a);
    std::vector<double> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = A.ptr[i] * s;
    Var v = push_op(Op::Scale, {a}, std::move(out), A.rows, A.cols);
    nodes_[v.id].scalar_arg = s;
    return v;
  }

  Var one_minus(Var a) { return unary(Op::OneMinus, a, [](double x) { return 1.0 - x; }); }
  Var sigmoid(Var a) { return unary(Op::Sigmoid, a, [](double x) { return nn::sigmoid(x); }); }
  Var tanh(Var a) { return unary(Op::Tanh, a, [](double x) { return std::tanh(x); }); }
  Var exp(Var a) { return unary(Op::Exp, a, [](double x) { return std::exp(x); }); }
  Var square(Var a) { return unary(Op::Square, a, [](double x) { return x * x; }); }

  /// Elementwise clamp; gradient passes only inside [lo, hi].
  Var clamp(Var a, double lo, double hi) {
    View A = value(a);
    std::vector<double> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(A.ptr[i], lo, hi);
    Var v = push_op(Op::Clamp, {a}, std::move(out), A.rows, A.cols);
    nodes_[v.id].scalar_arg = lo;
    nodes_[v.id].scalar_arg2 = hi;
    return v;
  }

  // ---- structure -----------------------------------------------------------

  Var concat(Var a, Var b) {
    View A = value(a), B = value(b);
    std::vector<double> out;
    out.reserve(A.size() + B.size());
    out.insert(out.end(), A.ptr, A.ptr + A.size());
    out.insert(out.end(), B.ptr, B.ptr + B.size());
    const std::size_t n = out.size();
    return push_op(Op::Concat, {a, b}, std::move(out), n, 1);
  }

  Var slice(Var a, std::size_t offset, std::size_t length) {
    View A = value(a);
    IDS_REQUIRE(offset + length <= A.size() && length > 0, "slice [", offset, ", ", offset + length,
                ") out of range ", A.size());
    std::vector<double> out(A.ptr + offset, A.ptr + offset + length);
    Var v = push_op(Op::Slice, {a}, std::move(out), length, 1);
    nodes_[v.id].aux = offset;
    return v;
  }

  /// Stacks equal-length vectors as the rows of a matrix.
  Var stack(std::span<const Var> rows) {
    IDS_REQUIRE(!rows.empty(), "stack of zero rows");
    const std::size_t cols = value(rows[0]).size();
    std::vector<double> out;
    out.reserve(rows.size() * cols);
    for (Var r : rows) {
      View R = value(r);
      IDS_REQUIRE(R.size() == cols, "stack: ragged rows");
      out.insert(out.end(), R.ptr, R.ptr + cols);
    }
    return push_op(Op::Stack, rows, std::move(out), rows.size(), cols);
  }

  /// Sum of equal-shaped values.
  Var add_n(std::span<const Var> terms) {
    IDS_REQUIRE(!terms.empty(), "add_n of zero terms");
    View first = value(terms[0]);
    std::vector<double> out(first.size(), 0.0);
    for (Var t : terms) {
      View T = value(t);
      IDS_REQUIRE(T.size() == out.size(), "add_n: shape mismatch");
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += T.ptr[i];
    }
    return push_op(Op::AddN, terms, std::move(out), first.rows, first.cols);
  }

  Var sum(Var a) {
    View A = value(a);
    double acc = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) acc += A.ptr[i];
    return push_op(Op::Sum, {a}, {acc}, 1, 1);
  }

  Var pick(Var a, std::size_t index) {
    View A = value(a);
    IDS_REQUIRE(index < A.size(), "pick index ", index, " out of range ", A.size());
    Var v = push_op(Op::Pick, {a}, {A.ptr[index]}, 1, 1);
    nodes_[v.id].aux = index;
    return v;
  }

  // ---- normalizers and densities ---------------------------------------------

  Var softmax(Var a) {
    View A = value(a);
    auto out = nn::softmax(A.span());
    return push_op(Op::Softmax, {a}, std::move(out), A.size(), 1);
  }

  Var log_softmax(Var a) {
    View A = value(a);
    auto out = nn::log_softmax(A.span());
    return push_op(Op::LogSoftmax, {a}, std::move(out), A.size(), 1);
  }

  /// Closed-form KL(q || p) between diagonal Gaussians given means and
  /// log-variances.
  Var gaussian_kl(Var mean_q, Var log_var_q, Var mean_p, Var log_var_p) {
    View mq = value(mean_q), lq = value(log_var_q), mp = value(mean_p), lp = value(log_var_p);
    IDS_REQUIRE(mq.size() == lq.size() && mq.size() == mp.size() && mq.size() == lp.size(),
                "gaussian_kl: dimension mismatch");
    double kl = 0.0;
    for (std::size_t i = 0; i < mq.size(); ++i) {
      const double d = mq[i] - mp[i];
      kl += 0.5 * (lp[i] - lq[i]) + (std::exp(lq[i]) + d * d) / (2.0 * std::exp(lp[i])) - 0.5;
    }
    const Var in[] = {mean_q, log_var_q, mean_p, log_var_p};
    return push_op(Op::GaussianKl, in, {kl}, 1, 1);
  }

  // ---- reverse pass ----------------------------------------------------------

  /// Seeds d(root)/d(root) = 1 and propagates to every recorded node.
  /// Parameter gradients are accumulated (not overwritten).
  void backward(Var root) {
    Node& r = nodes_.at(root.id);
    IDS_REQUIRE(r.rows * r.cols == 1, "backward root must be a scalar");
    for (auto& n : nodes_) n.grad.clear();
    r.grad.assign(1, 1.0);
    for (std::size_t i = root.id + 1; i-- > 0;) {
      Node& n = nodes_[i];
      if (n.grad.empty() || !n.requires_grad) continue;
      propagate(n);
    }
  }

 private:
  enum class Op : std::uint8_t {
    Leaf, Param, Row, MatVec, MatVecT, Dot, Add, Sub, Mul, Scale, OneMinus, Sigmoid, Tanh, Exp,
    Square, Clamp, Concat, Slice, Stack, AddN, Sum, Pick, Softmax, LogSoftmax, GaussianKl,
  };

  struct Node {
    Op op = Op::Leaf;
    std::vector<std::uint32_t> inputs;
    std::vector<double> value;
    std::vector<double> grad;
    std::size_t rows = 0, cols = 0;
    std::size_t aux = 0;
    double scalar_arg = 0.0, scalar_arg2 = 0.0;
    Parameter* param = nullptr;
    Parameter* table = nullptr;
    bool requires_grad = false;
  };

  Var push(Node n) {
    nodes_.push_back(std::move(n));
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
  }

  Var push_op(Op op, std::span<const Var> in, std::vector<double> out, std::size_t rows, std::size_t cols) {
    Node n;
    n.op = op;
    n.inputs.reserve(in.size());
    for (Var v : in) {
      n.inputs.push_back(v.id);
      n.requires_grad = n.requires_grad || nodes_[v.id].requires_grad;
    }
    n.value = std::move(out);
    n.rows = rows;
    n.cols = cols;
    return push(std::move(n));
  }
  Var push_op(Op op, std::initializer_list<Var> in, std::vector<double> out, std::size_t rows,
              std::size_t cols) {
    return push_op(op, std::span<const Var>(in.begin(), in.size()), std::move(out), rows, cols);
  }

  template <typename F>
  Var unary(Op op, Var a, F f) {
    View A = value(a);
    std::vector<double> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(A.ptr[i]);
    return push_op(op, {a}, std::move(out), A.rows, A.cols);
  }

  template <typename F>
  Var binary(Op op, Var a, Var b, F f) {
    View A = value(a), B = value(b);
    IDS_REQUIRE(A.size() == B.size(), "elementwise op: size mismatch ", A.size(), " vs ", B.size());
    std::vector<double> out(A.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(A.ptr[i], B.ptr[i]);
    return push_op(op, {a, b}, std::move(out), A.rows, A.cols);
  }

  /// Gradient buffer of an input node, or nullptr when it needs none.
  double* grad_of(std::uint32_t id) {
    Node& n = nodes_[id];
    if (!n.requires_grad) return nullptr;
    if (n.op == Op::Param) return n.param->grad.data();
    if (n.grad.empty()) n.grad.assign(n.rows * n.cols, 0.0);
    return n.grad.data();
  }

  const double* val(std::uint32_t id) const {
    const Node& n = nodes_[id];
    return n.param ? n.param->value.data() : n.value.data();
  }

  void propagate(Node& n) {
    const double* g = n.grad.data();
    const std::size_t size = n.rows * n.cols;
    switch (n.op) {
      case Op::Leaf:
        break;
      case Op::Param: {
        double* pg = n.param->grad.data();
        for (std::size_t i = 0; i < size; ++i) pg[i] += g[i];
        break;
      }
      case Op::Row: {
        auto row = n.table->grad.row(n.aux);
        for (std::size_t i = 0; i < size; ++i) row[i] += g[i];
        break;
      }
      case Op::MatVec: {
        const Node& m = nodes_[n.inputs[0]];
        const std::size_t rows = m.rows, cols = m.cols;
        const double* M = val(n.inputs[0]);
        const double* x = val(n.inputs[1]);
        if (double* gm = grad_of(n.inputs[0])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double gr = g[r];
            if (gr == 0.0) continue;
            double* row = gm + r * cols;
            for (std::size_t c = 0; c < cols; ++c) row[c] += gr * x[c];
          }
        }
        if (double* gx = grad_of(n.inputs[1])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double gr = g[r];
            const double* row = M + r * cols;
            for (std::size_t c = 0; c < cols; ++c) gx[c] += row[c] * gr;
          }
        }
        break;
      }
      case Op::MatVecT: {
        const Node& m = nodes_[n.inputs[0]];
        const std::size_t rows = m.rows, cols = m.cols;
        const double* M = val(n.inputs[0]);
        const double* x = val(n.inputs[1]);
        if (double* gm = grad_of(n.inputs[0])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double xr = x[r];
            if (xr == 0.0) continue;
            double* row = gm + r * cols;
            for (std::size_t c = 0; c < cols; ++c) row[c] += xr * g[c];
          }
        }
        if (double* gx = grad_of(n.inputs[1])) {
          for (std::size_t r = 0; r < rows; ++r) {
            const double* row = M + r * cols;
            double acc = 0.0;
            for (std::size_t c = 0; c < cols; ++c) acc += row[c] * g[c];
            gx[r] += acc;
          }
        }
        break;
      }
      case Op::Dot: {
        const std::size_t len = nodes_[n.inputs[0]].rows * nodes_[n.inputs[0]].cols;
        const double* a = val(n.inputs[0]);
        const double* b = val(n.inputs[1]);
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < len; ++i) ga[i] += g[0] * b[i];
        if (double* gb = grad_of(n.inputs[1]))
          for (std::size_t i = 0; i < len; ++i) gb[i] += g[0] * a[i];
        break;
      }
      case Op::Add:
      case Op::Sub: {
        const double sign = n.op == Op::Add ? 1.0 : -1.0;
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i];
        if (double* gb = grad_of(n.inputs[1]))
          for (std::size_t i = 0; i < size; ++i) gb[i] += sign * g[i];
        break;
      }
      case Op::Mul: {
        const double* a = val(n.inputs[0]);
        const double* b = val(n.inputs[1]);
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i] * b[i];
        if (double* gb = grad_of(n.inputs[1]))
          for (std::size_t i = 0; i < size; ++i) gb[i] += g[i] * a[i];
        break;
      }
      case Op::Scale: {
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i] * n.scalar_arg;
        break;
      }
      case Op::OneMinus: {
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] -= g[i];
        break;
      }
      case Op::Sigmoid: {
        const double* y = n.value.data();
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::Tanh: {
        const double* y = n.value.data();
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
        break;
      }
      case Op::Exp: {
        const double* y = n.value.data();
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i] * y[i];
        break;
      }
      case Op::Square: {
        const double* a = val(n.inputs[0]);
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[i] += 2.0 * g[i] * a[i];
        break;
      }
      case Op::Clamp: {
        const double* a = val(n.inputs[0]);
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i)
            if (a[i] >= n.scalar_arg && a[i] <= n.scalar_arg2) ga[i] += g[i];
        break;
      }
      case Op::Concat: {
        const Node& a = nodes_[n.inputs[0]];
        const std::size_t na = a.rows * a.cols;
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < na; ++i) ga[i] += g[i];
        if (double* gb = grad_of(n.inputs[1]))
          for (std::size_t i = na; i < size; ++i) gb[i - na] += g[i];
        break;
      }
      case Op::Slice: {
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < size; ++i) ga[n.aux + i] += g[i];
        break;
      }
      case Op::Stack: {
        for (std::size_t r = 0; r < n.inputs.size(); ++r) {
          if (double* gr = grad_of(n.inputs[r]))
            for (std::size_t c = 0; c < n.cols; ++c) gr[c] += g[r * n.cols + c];
        }
        break;
      }
      case Op::AddN: {
        for (auto in : n.inputs) {
          if (double* gi = grad_of(in))
            for (std::size_t i = 0; i < size; ++i) gi[i] += g[i];
        }
        break;
      }
      case Op::Sum: {
        const std::size_t len = nodes_[n.inputs[0]].rows * nodes_[n.inputs[0]].cols;
        if (double* ga = grad_of(n.inputs[0]))
          for (std::size_t i = 0; i < len; ++i) ga[i] += g[0];
        break;
      }
      case Op::Pick: {
        if (double* ga = grad_of(n.inputs[0])) ga[n.aux] += g[0];
        break;
      }
      case Op::Softmax: {
        const double* y = n.value.data();
        if (double* ga = grad_of(n.inputs[0])) {
          double gy = 0.0;
          for (std::size_t i = 0; i < size; ++i) gy += g[i] * y[i];
          for (std::size_t i = 0; i < size; ++i) ga[i] += y[i] * (g[i] - gy);
        }
        break;
      }
      case Op::LogSoftmax: {
        const double* y = n.value.data();
        if (double* ga = grad_of(n.inputs[0])) {
          double gs = 0.0;
          for (std::size_t i = 0; i < size; ++i) gs += g[i];
          for (std::size_t i = 0; i < size; ++i) ga[i] += g[i] - std::exp(y[i]) * gs;
        }
        break;
      }
      case Op::GaussianKl: {
        const std::size_t dim = nodes_[n.inputs[0]].rows * nodes_[n.inputs[0]].cols;
        const double* mq = val(n.inputs[0]);
        const double* lq = val(n.inputs[1]);
        const double* mp = val(n.inputs[2]);
        const double* lp = val(n.inputs[3]);
        double* gmq = grad_of(n.inputs[0]);
        double* glq = grad_of(n.inputs[1]);
        double* gmp = grad_of(n.inputs[2]);
        double* glp = grad_of(n.inputs[3]);
        for (std::size_t i = 0; i < dim; ++i) {
          const double inv_vp = std::exp(-lp[i]);
          const double vq = std::exp(lq[i]);
          const double d = mq[i] - mp[i];
          if (gmq) gmq[i] += g[0] * d * inv_vp;
          if (gmp) gmp[i] -= g[0] * d * inv_vp;
          if (glq) glq[i] += g[0] * 0.5 * (vq * inv_vp - 1.0);
          if (glp) glp[i] += g[0] * 0.5 * (1.0 - (vq + d * d) * inv_vp);
        }
        break;
      }
    }
  }

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, std::uint32_t> param_nodes_;
};

}  // namespace ids::nn
