// Copyright 2026 The dqcc Authors
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
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/error.hpp"
#include "dqcc/text.hpp"

namespace dqcc {

/// XOR of measurement bits, stored as a sorted set of bit ids.
struct BitExpr {
  std::vector<int> bits;

  BitExpr() = default;
  static BitExpr of(int bit) {
    BitExpr e;
    e.bits.push_back(bit);
    return e;
  }

  bool empty() const { return bits.empty(); }
  bool contains(int bit) const { return std::binary_search(bits.begin(), bits.end(), bit); }

  BitExpr& operator^=(const BitExpr& other) {
    std::vector<int> out;
    std::set_symmetric_difference(bits.begin(), bits.end(), other.bits.begin(), other.bits.end(),
                                  std::back_inserter(out));
    bits = std::move(out);
    return *this;
  }
  friend BitExpr operator^(BitExpr a, const BitExpr& b) { return a ^= b; }
  bool operator==(const BitExpr&) const = default;

  /// Evaluates under an assignment indexed by bit id.
  bool eval(const std::vector<int>& values) const {
    int v = 0;
    for (int b : bits) v ^= values.at(b);
    return v != 0;
  }
};

enum class OpKind { H, T, CX, E, M, X, Z };

/// One extended gate. For H, T, X, Z and M the qubit is `a`; CX uses `a` as
/// control and `b` as target; E entangles `a` and `b`. M writes `bit`; X and Z
/// are applied when `expr` evaluates to 1.
struct Op {
  OpKind kind = OpKind::H;
  int a = -1;
  int b = -1;
  int bit = -1;
  BitExpr expr;

  static Op h(int q) { return {OpKind::H, q, -1, -1, {}}; }
  static Op t(int q) { return {OpKind::T, q, -1, -1, {}}; }
  static Op cx(int c, int t) { return {OpKind::CX, c, t, -1, {}}; }
  static Op e(int x, int y) { return {OpKind::E, x, y, -1, {}}; }
  static Op m(int q, int bit) { return {OpKind::M, q, -1, bit, {}}; }
  static Op x(int q, BitExpr e) { return {OpKind::X, q, -1, -1, std::move(e)}; }
  static Op z(int q, BitExpr e) { return {OpKind::Z, q, -1, -1, std::move(e)}; }

  bool two_qubit() const { return kind == OpKind::CX || kind == OpKind::E; }
  bool touches(int q) const { return a == q || (two_qubit() && b == q); }
  bool is_pauli() const { return kind == OpKind::X || kind == OpKind::Z; }
  bool operator==(const Op&) const = default;
};

struct Wire {
  std::string name;
  bool communication = false;
  int processor = -1;
};

class ExtendedCircuit {
 public:
  ExtendedCircuit() = default;

  int add_wire(std::string name, bool communication = false, int processor = -1) {
    wires_.push_back({std::move(name), communication, processor});
    return static_cast<int>(wires_.size()) - 1;
  }
  int new_bit(std::string name = {}) {
    if (name.empty()) name = "b" + std::to_string(bit_names_.size());
    bit_names_.push_back(std::move(name));
    return static_cast<int>(bit_names_.size()) - 1;
  }
  void push(Op op) { ops_.push_back(std::move(op)); }
  void begin_step(int step) { steps_.push_back({step, ops_.size()}); }

  const std::vector<Wire>& wires() const { return wires_; }
  const std::vector<Op>& ops() const { return ops_; }
  std::vector<Op>& ops() { return ops_; }
  const std::vector<std::string>& bit_names() const { return bit_names_; }
  std::size_t num_bits() const { return bit_names_.size(); }
  std::size_t num_wires() const { return wires_.size(); }

  /// (step number, index of the first op of that step)
  const std::vector<std::pair<int, std::size_t>>& steps() const { return steps_; }

  std::optional<int> wire_index(std::string_view name) const {
    for (std::size_t i = 0; i < wires_.size(); ++i) {
      if (wires_[i].name == name) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  std::vector<int> computation_wires() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < wires_.size(); ++i) {
      if (!wires_[i].communication) out.push_back(static_cast<int>(i));
    }
    return out;
  }

  /// ASAP layer of each op. A classically controlled Pauli also waits for the
  /// measurements producing the bits it reads.
  std::vector<int> layers() const {
    std::vector<int> wire_level(wires_.size(), -1);
    std::vector<int> bit_level(bit_names_.size(), -1);
    std::vector<int> out;
    out.reserve(ops_.size());
    for (const auto& op : ops_) {
      int level = wire_level.at(op.a);
      if (op.two_qubit()) level = std::max(level, wire_level.at(op.b));
      for (int b : op.expr.bits) level = std::max(level, bit_level.at(b));
      ++level;
      wire_level[op.a] = level;
      if (op.two_qubit()) wire_level[op.b] = level;
      if (op.kind == OpKind::M) bit_level.at(op.bit) = level;
      out.push_back(level);
    }
    return out;
  }

  std::size_t depth() const {
    auto l = layers();
    return l.empty() ? 0 : static_cast<std::size_t>(*std::max_element(l.begin(), l.end()) + 1);
  }

  std::size_t count(OpKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(ops_.begin(), ops_.end(), [&](const Op& o) { return o.kind == kind; }));
  }

 private:
  std::vector<Wire> wires_;
  std::vector<Op> ops_;
  std::vector<std::string> bit_names_;
  std::vector<std::pair<int, std::size_t>> steps_;
};

/// Layers strictly between the E creating `qubit` and the M consuming it.
inline int lifetime(const ExtendedCircuit& fragment, int qubit) {
  auto levels = fragment.layers();
  int created = -1;
  int measured = -1;
  for (std::size_t i = 0; i < fragment.ops().size(); ++i) {
    const auto& op = fragment.ops()[i];
    if (op.kind == OpKind::E && op.touches(qubit) && created < 0) created = levels[i];
    if (op.kind == OpKind::M && op.a == qubit && created >= 0) {
      measured = levels[i];
      break;
    }
  }
  if (created < 0 || measured < 0) {
    throw Error(ErrorKind::MissingLifetimeEndpoint,
                "qubit '" + fragment.wires().at(qubit).name + "' lacks E or M");
  }
  return measured - created - 1;
}

/// Lifts a logical circuit onto computation wires of an extended circuit.
inline ExtendedCircuit to_extended(const LogicalCircuit& circuit) {
  ExtendedCircuit out;
  for (const auto& q : circuit.qubits()) out.add_wire(q);
  for (auto ref : circuit.ordered_refs()) {
    const Gate& g = circuit.at(ref);
    switch (g.kind) {
      case GateKind::H: out.push(Op::h(g.target)); break;
      case GateKind::T: out.push(Op::t(g.target)); break;
      case GateKind::CX: out.push(Op::cx(g.control, g.target)); break;
    }
  }
  return out;
}

inline std::string to_string(const BitExpr& e, const ExtendedCircuit& c) {
  if (e.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < e.bits.size(); ++i) {
    if (i) out += '^';
    out += c.bit_names().at(e.bits[i]);
  }
  return out;
}

/// Physical circuit text: the logical format plus `e`, `m c -> bit`, `zc`,
/// `xc` and `--- step N ---` markers. Communication wires are declared on a
/// `comm` line after `qubits`.
inline std::string to_text(const ExtendedCircuit& c) {
  std::string out = "qubits";
  std::string comm;
  for (const auto& w : c.wires()) (w.communication ? comm : out) += " " + w.name;
  out += "\n";
  if (!comm.empty()) out += "comm" + comm + "\n";
  const auto& w = c.wires();
  std::size_t next_step = 0;
  for (std::size_t i = 0; i <= c.ops().size(); ++i) {
    while (next_step < c.steps().size() && c.steps()[next_step].second == i) {
      out += "--- step " + std::to_string(c.steps()[next_step].first) + " ---\n";
      ++next_step;
    }
    if (i == c.ops().size()) break;
    const Op& op = c.ops()[i];
    switch (op.kind) {
      case OpKind::H: out += "h " + w[op.a].name; break;
      case OpKind::T: out += "t " + w[op.a].name; break;
      case OpKind::CX: out += "cx " + w[op.a].name + " " + w[op.b].name; break;
      case OpKind::E: out += "e " + w[op.a].name + " " + w[op.b].name; break;
      case OpKind::M: out += "m " + w[op.a].name + " -> " + c.bit_names()[op.bit]; break;
      case OpKind::X: out += "xc " + w[op.a].name + " " + to_string(op.expr, c); break;
      case OpKind::Z: out += "zc " + w[op.a].name + " " + to_string(op.expr, c); break;
    }
    out += "\n";
  }
  return out;
}

inline ExtendedCircuit parse_physical(std::string_view text) {
  ExtendedCircuit c;
  std::unordered_map<std::string, int> bits;
  bool have_header = false;
  detail::for_each_statement(text, [&](int line, const std::vector<std::string>& tok) {
    const auto& op = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() != n) throw Error(ErrorKind::Syntax, "wrong operand count for '" + op + "'", line);
    };
    if (op == "qubits" || op == "comm") {
      if (op == "qubits") have_header = true;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (c.wire_index(tok[i])) throw Error(ErrorKind::DuplicateNode, "'" + tok[i] + "'", line);
        c.add_wire(tok[i], op == "comm");
      }
      return;
    }
    if (!have_header) throw Error(ErrorKind::Syntax, "missing 'qubits' header", line);
    if (op == "---") {
      if (tok.size() != 4 || tok[1] != "step" || tok[3] != "---") {
        throw Error(ErrorKind::Syntax, "malformed step marker", line);
      }
      c.begin_step(std::stoi(tok[2]));
      return;
    }
    auto wire = [&](const std::string& name) {
      auto w = c.wire_index(name);
      if (!w) throw Error(ErrorKind::UndeclaredQubit, "'" + name + "'", line);
      return *w;
    };
    auto bit_id = [&](const std::string& name, bool create) {
      auto it = bits.find(name);
      if (it != bits.end()) return it->second;
      if (!create) throw Error(ErrorKind::Syntax, "bit '" + name + "' read before written", line);
      return bits[name] = c.new_bit(name);
    };
    auto expr = [&](const std::string& s) {
      BitExpr e;
      if (s == "0") return e;
      std::size_t start = 0;
      while (start <= s.size()) {
        auto end = s.find('^', start);
        if (end == std::string::npos) end = s.size();
        e ^= BitExpr::of(bit_id(s.substr(start, end - start), false));
        start = end + 1;
      }
      return e;
    };
    if (op == "h" || op == "t") {
      need(2);
      c.push(op == "h" ? Op::h(wire(tok[1])) : Op::t(wire(tok[1])));
    } else if (op == "cx" || op == "e") {
      need(3);
      int a = wire(tok[1]);
      int b = wire(tok[2]);
      if (a == b) throw Error(ErrorKind::EqualOperands, op + " " + tok[1] + " " + tok[2], line);
      c.push(op == "cx" ? Op::cx(a, b) : Op::e(a, b));
    } else if (op == "m") {
      need(4);
      if (tok[2] != "->") throw Error(ErrorKind::Syntax, "expected '->'", line);
      int q = wire(tok[1]);
      c.push(Op::m(q, bit_id(tok[3], true)));
    } else if (op == "zc" || op == "xc") {
      need(3);
      int q = wire(tok[1]);
      c.push(op == "zc" ? Op::z(q, expr(tok[2])) : Op::x(q, expr(tok[2])));
    } else {
      throw Error(ErrorKind::UnknownGate, "'" + op + "'", line);
    }
  });
  return c;
}

}  // namespace dqcc
