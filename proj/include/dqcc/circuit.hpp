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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dqcc/error.hpp"
#include "dqcc/text.hpp"

namespace dqcc {

enum class GateKind { H, T, CX };

/// A logical gate. For CX, `control` and `target` are both set; single-qubit
/// gates only use `target`.
struct Gate {
  GateKind kind = GateKind::H;
  int control = -1;
  int target = -1;
  std::size_t id = 0;  // position in source order

  bool touches(int q) const { return target == q || control == q; }
  bool shares_qubit(const Gate& other) const {
    return touches(other.target) || (other.control >= 0 && touches(other.control));
  }

  static Gate h(int q) { return {GateKind::H, -1, q}; }
  static Gate t(int q) { return {GateKind::T, -1, q}; }
  static Gate cx(int c, int t) { return {GateKind::CX, c, t}; }
};

struct Layer {
  std::vector<Gate> gates;
};

/// Position of a gate inside a layered circuit.
struct GateRef {
  std::size_t layer = 0;
  std::size_t slot = 0;
  auto operator<=>(const GateRef&) const = default;
};

class LogicalCircuit {
 public:
  LogicalCircuit() = default;
  explicit LogicalCircuit(std::vector<std::string> qubits) : qubits_(std::move(qubits)) {
    for (std::size_t i = 0; i < qubits_.size(); ++i) index_[qubits_[i]] = static_cast<int>(i);
  }

  const std::vector<std::string>& qubits() const { return qubits_; }
  std::size_t num_qubits() const { return qubits_.size(); }
  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }

  std::optional<int> qubit_index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t gate_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.gates.size();
    return n;
  }

  /// Appends `g` as a new singleton layer; the id is its source position.
  LogicalCircuit& append(Gate g) {
    validate(g);
    g.id = gate_count();
    layers_.push_back(Layer{{g}});
    return *this;
  }

  /// Appends a full layer. Throws if two gates share a qubit. Ids are
  /// reassigned in source order unless `keep_ids` is set.
  LogicalCircuit& append_layer(std::vector<Gate> gates, bool keep_ids = false) {
    std::size_t next = gate_count();
    for (std::size_t a = 0; a < gates.size(); ++a) {
      validate(gates[a]);
      if (!keep_ids) gates[a].id = next++;
      for (std::size_t b = 0; b < a; ++b) {
        if (gates[a].shares_qubit(gates[b])) {
          throw Error(ErrorKind::Syntax, "gates in one layer share a qubit");
        }
      }
    }
    layers_.push_back(Layer{std::move(gates)});
    return *this;
  }

  const Gate& at(GateRef ref) const { return layers_[ref.layer].gates[ref.slot]; }

  /// Gates in layer order, ties broken by position inside the layer.
  std::vector<GateRef> ordered_refs() const {
    std::vector<GateRef> out;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      for (std::size_t s = 0; s < layers_[l].gates.size(); ++s) out.push_back({l, s});
    }
    return out;
  }

  bool operator==(const LogicalCircuit& other) const {
    if (qubits_ != other.qubits_ || layers_.size() != other.layers_.size()) return false;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& a = layers_[l].gates;
      const auto& b = other.layers_[l].gates;
      if (a.size() != b.size()) return false;
      for (std::size_t s = 0; s < a.size(); ++s) {
        if (a[s].kind != b[s].kind || a[s].control != b[s].control || a[s].target != b[s].target) {
          return false;
        }
      }
    }
    return true;
  }

 private:
  void validate(const Gate& g) const {
    auto n = static_cast<int>(qubits_.size());
    if (g.target < 0 || g.target >= n) throw Error(ErrorKind::UndeclaredQubit, "gate target");
    if (g.kind == GateKind::CX) {
      if (g.control < 0 || g.control >= n) throw Error(ErrorKind::UndeclaredQubit, "gate control");
      if (g.control == g.target) throw Error(ErrorKind::EqualOperands, "cx control equals target");
    }
  }

  std::vector<std::string> qubits_;
  std::unordered_map<std::string, int> index_;
  std::vector<Layer> layers_;
};

/// Parses the line-oriented circuit format:
///
///     qubits q0 q1 q2
///     h q0
///     cx q0 q1
///
/// Each gate becomes its own layer; call `layerize` to compact.
inline LogicalCircuit parse_circuit(std::string_view text) {
  std::optional<LogicalCircuit> circuit;
  detail::for_each_statement(text, [&](int line, const std::vector<std::string>& tok) {
    const auto& op = tok[0];
    if (op == "qubits") {
      if (circuit) throw Error(ErrorKind::Syntax, "duplicate qubits header", line);
      std::vector<std::string> names(tok.begin() + 1, tok.end());
      auto sorted = names;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(ErrorKind::Syntax, "duplicate qubit name", line);
      }
      circuit.emplace(std::move(names));
      return;
    }
    if (!circuit) throw Error(ErrorKind::Syntax, "missing qubits header", line);
    auto qubit = [&](const std::string& name) {
      auto q = circuit->qubit_index(name);
      if (!q) throw Error(ErrorKind::UndeclaredQubit, "'" + name + "'", line);
      return *q;
    };
    if (op == "h" || op == "t") {
      if (tok.size() != 2) throw Error(ErrorKind::Syntax, "expected one operand", line);
      circuit->append(op == "h" ? Gate::h(qubit(tok[1])) : Gate::t(qubit(tok[1])));
    } else if (op == "cx") {
      if (tok.size() != 3) throw Error(ErrorKind::Syntax, "expected two operands", line);
      int c = qubit(tok[1]);
      int t = qubit(tok[2]);
      if (c == t) throw Error(ErrorKind::EqualOperands, "cx " + tok[1] + " " + tok[2], line);
      circuit->append(Gate::cx(c, t));
    } else {
      throw Error(ErrorKind::UnknownGate, "'" + op + "'", line);
    }
  });
  if (!circuit) throw Error(ErrorKind::Syntax, "missing qubits header");
  return std::move(*circuit);
}

inline std::string to_text(const LogicalCircuit& circuit) {
  std::string out = "qubits";
  for (const auto& q : circuit.qubits()) out += " " + q;
  out += "\n";
  for (const auto& layer : circuit.layers()) {
    for (const auto& g : layer.gates) {
      const auto& names = circuit.qubits();
      switch (g.kind) {
        case GateKind::H: out += "h " + names[g.target] + "\n"; break;
        case GateKind::T: out += "t " + names[g.target] + "\n"; break;
        case GateKind::CX:
          out += "cx " + names[g.control] + " " + names[g.target] + "\n";
          break;
      }
    }
  }
  return out;
}

/// Greedy ASAP layering: each gate lands in the first layer after the last
/// layer touching any of its qubits. Gate ids are kept.
inline LogicalCircuit layerize(const LogicalCircuit& circuit) {
  std::vector<int> frontier(circuit.num_qubits(), -1);
  std::vector<std::vector<Gate>> layers;
  for (auto ref : circuit.ordered_refs()) {
    const Gate& g = circuit.at(ref);
    int level = frontier[g.target];
    if (g.control >= 0) level = std::max(level, frontier[g.control]);
    ++level;
    if (static_cast<std::size_t>(level) == layers.size()) layers.emplace_back();
    layers[level].push_back(g);
    frontier[g.target] = level;
    if (g.control >= 0) frontier[g.control] = level;
  }
  LogicalCircuit out(circuit.qubits());
  for (auto& l : layers) out.append_layer(std::move(l), /*keep_ids=*/true);
  return out;
}

/// One remote CX occurrence. Processors and qubits are 0-based indices;
/// `index` is the 0-based position in the enumeration (printed 1-based).
struct Commodity {
  std::size_t index = 0;
  int control_proc = -1;
  int target_proc = -1;
  int control_qubit = -1;
  int target_qubit = -1;
  std::size_t layer = 0;
  GateRef gate;
};

/// Enumerates the CX gates whose operands sit on different processors, in
/// layer order with ties broken by position inside the layer.
inline std::vector<Commodity> extract_commodities(const LogicalCircuit& circuit,
                                                  std::span<const int> placement) {
  for (std::size_t q = 0; q < circuit.num_qubits(); ++q) {
    if (q >= placement.size() || placement[q] < 0) {
      throw Error(ErrorKind::UnplacedQubit, "'" + circuit.qubits()[q] + "'");
    }
  }
  std::vector<Commodity> out;
  for (auto ref : circuit.ordered_refs()) {
    const Gate& g = circuit.at(ref);
    if (g.kind != GateKind::CX) continue;
    int pc = placement[g.control];
    int pt = placement[g.target];
    if (pc == pt) continue;
    out.push_back({out.size(), pc, pt, g.control, g.target, ref.layer, ref});
  }
  return out;
}

}  // namespace dqcc
