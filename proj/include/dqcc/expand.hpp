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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/error.hpp"
#include "dqcc/extended.hpp"
#include "dqcc/flow.hpp"
#include "dqcc/network.hpp"
#include "dqcc/predicate.hpp"
#include "dqcc/rewrite.hpp"

namespace dqcc {

/// Hands out bit ids named b<step>_<seq>.
class BitAllocator {
 public:
  explicit BitAllocator(int step = 1) : step_(step) {}
  void set_step(int step) {
    step_ = step;
    seq_ = 0;
  }
  int next(ExtendedCircuit& c) {
    return c.new_bit("b" + std::to_string(step_) + "_" + std::to_string(seq_++));
  }

 private:
  int step_;
  int seq_ = 0;
};

/// Endpoints of an entanglement path and the Pauli corrections still owed to
/// them: Z^z_expr on the head and X^x_expr on the tail.
struct PathEnds {
  int head = -1;
  int tail = -1;
  BitExpr z_expr;
  BitExpr x_expr;
};

/// Chains links (u_h, v_h), h = 1..m, where v_h and u_{h+1} share a processor.
/// Emits every E, then one swap per intermediate processor; all swaps run in
/// parallel, so the stage depth (E, CX, H, M, corrections) is 5 for any m >= 2.
/// Corrections are returned, not emitted.
inline PathEnds entanglement_path(ExtendedCircuit& out, const std::vector<std::pair<int, int>>& hops,
                                  BitAllocator& bits) {
  if (hops.empty()) throw Error(ErrorKind::BindingFailure, "empty entanglement path");
  for (auto [u, v] : hops) out.push(Op::e(u, v));
  PathEnds ends{hops.front().first, hops.back().second, {}, {}};
  for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
    out.push(Op::cx(hops[h].second, hops[h + 1].first));
  }
  for (std::size_t h = 0; h + 1 < hops.size(); ++h) out.push(Op::h(hops[h].second));
  for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
    int bz = bits.next(out);
    int bx = bits.next(out);
    out.push(Op::m(hops[h].second, bz));
    out.push(Op::m(hops[h + 1].first, bx));
    ends.z_expr ^= BitExpr::of(bz);
    ends.x_expr ^= BitExpr::of(bx);
  }
  return ends;
}

/// Stand-alone path over m links with its corrections applied, on fresh
/// wires u1 v1 ... um vm. Equivalent to E(u1, vm).
inline ExtendedCircuit entanglement_path_fragment(int m) {
  ExtendedCircuit c;
  std::vector<std::pair<int, int>> hops;
  for (int h = 1; h <= m; ++h) {
    int u = c.add_wire("u" + std::to_string(h), true, h - 1);
    int v = c.add_wire("v" + std::to_string(h), true, h);
    hops.emplace_back(u, v);
  }
  BitAllocator bits;
  auto ends = entanglement_path(c, hops, bits);
  if (!ends.z_expr.empty()) c.push(Op::z(ends.head, ends.z_expr));
  if (!ends.x_expr.empty()) c.push(Op::x(ends.tail, ends.x_expr));
  return c;
}

/// Telegate on an already prepared path, with the path corrections folded into
/// the final Paulis: Z^{b_r + path z} on qc and X^{b_w + path x} on qt.
inline void emit_telegate(ExtendedCircuit& out, int qc, int qt, const PathEnds& path,
                          BitAllocator& bits) {
  const int cw = path.head;
  const int cr = path.tail;
  out.push(Op::cx(qc, cw));
  out.push(Op::cx(cr, qt));
  out.push(Op::h(cr));
  int bw = bits.next(out);
  int br = bits.next(out);
  out.push(Op::m(cw, bw));
  out.push(Op::m(cr, br));
  BitExpr z = BitExpr::of(br) ^ path.z_expr;
  BitExpr x = BitExpr::of(bw) ^ path.x_expr;
  out.push(Op::z(qc, z));
  out.push(Op::x(qt, x));
}

/// Emits ops while carrying pending Pauli corrections forward. A correction
/// is written out only when it cannot pass the next gate on its wire, or when
/// flushed explicitly.
class FrameEmitter {
 public:
  explicit FrameEmitter(ExtendedCircuit& out) : out_(out) {}

  void gate(const Op& op) {
    if (!frame_.push(op, &stats_)) {
      ++blocked_flushes_;
      flush(op.a);
      if (op.two_qubit()) flush(op.b);
      frame_.push(op, &stats_);
    }
    out_.push(op);
  }

  void raw(const Op& op) { out_.push(op); }

  /// Measurement of a communication qubit: a pending X folds into the bit,
  /// a pending Z is dropped.
  void measure(int q, int bit) {
    for (const auto& t : frame_.take(q)) {
      if (t.kind == PauliKind::X) alias_[bit] ^= t.expr;
    }
    out_.push(Op::m(q, bit));
  }

  /// Queues a correction written in terms of raw measurement bits.
  void correct(PauliKind kind, int q, const BitExpr& raw_bits) {
    frame_.add({kind, q, effective(raw_bits)});
  }

  BitExpr effective(const BitExpr& raw_bits) const {
    BitExpr e = raw_bits;
    for (int b : raw_bits.bits) {
      if (auto it = alias_.find(b); it != alias_.end()) e ^= it->second;
    }
    return e;
  }

  void flush(int q) {
    for (const auto& t : frame_.take(q)) out_.push(t.as_op());
  }
  void flush_all() {
    for (const auto& t : frame_.all()) out_.push(t.as_op());
    frame_ = {};
  }

  std::size_t blocked_flushes() const { return blocked_flushes_; }
  const RuleStats& stats() const { return stats_; }

 private:
  ExtendedCircuit& out_;
  PauliFrame frame_;
  std::map<int, BitExpr> alias_;
  RuleStats stats_;
  std::size_t blocked_flushes_ = 0;
};

struct ExpandStats {
  std::size_t e_gates = 0;
  std::size_t swaps = 0;
  std::size_t merges_applied = 0;
  std::size_t merges_skipped = 0;
  std::size_t in_step_flushes = 0;
};

struct PhysicalSchedule {
  ExtendedCircuit circuit;
  ExpandStats stats;
};

namespace detail {

inline Op logical_op(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return Op::h(g.target);
    case GateKind::T: return Op::t(g.target);
    case GateKind::CX: return Op::cx(g.control, g.target);
  }
  return Op::h(g.target);
}

}  // namespace detail

/// Expands a solved schedule into a physical circuit: per step, bind links,
/// open every E, run swaps, then the step's local gates and telegates in
/// logical order. Co-scheduled pairs with a merge plan get j's rewritten
/// pre-processing ahead of the local gates the plan moves.
inline PhysicalSchedule emit_schedule(const Solution& solution, const LogicalCircuit& layered,
                                      Predicate& predicate, const NetworkGraph& net,
                                      const QuotientGraph& q) {
  PhysicalSchedule result;
  ExtendedCircuit& out = result.circuit;
  auto placement = net.placement_for(layered);
  for (std::size_t i = 0; i < layered.num_qubits(); ++i) {
    out.add_wire(layered.qubits()[i], false, placement[i]);
  }
  const auto& comms = predicate.commodities();
  const auto& seq = predicate.sequence();
  if (comms.empty()) {
    for (const auto& g : seq) out.push(detail::logical_op(g));
    return result;
  }

  // step of every sequence position: telegates use their tau, local gates
  // follow their latest predecessor
  std::vector<int> step(seq.size(), 1);
  std::vector<int> last_on(layered.num_qubits(), -1);
  for (std::size_t p = 0; p < seq.size(); ++p) {
    const Gate& g = seq[p];
    int s = 1;
    for (int qb : {g.control, g.target}) {
      if (qb >= 0 && last_on[qb] >= 0) s = std::max(s, step[last_on[qb]]);
    }
    int c = predicate.commodity_at(p);
    step[p] = c >= 0 ? solution.routes.at(c).tau : s;
    if (c >= 0 && step[p] < s) {
      throw Error(ErrorKind::BindingFailure, "commodity scheduled before a predecessor");
    }
    for (int qb : {g.control, g.target}) {
      if (qb >= 0) last_on[qb] = static_cast<int>(p);
    }
  }

  std::map<int, int> comm_wire;  // network node -> wire
  auto wire_of = [&](int node) {
    auto it = comm_wire.find(node);
    if (it != comm_wire.end()) return it->second;
    int w = out.add_wire(net.nodes[node].name, true, net.nodes[node].processor);
    comm_wire[node] = w;
    return w;
  };

  FrameEmitter em(out);
  BitAllocator bits;
  const int d = e_depth(solution);
  for (int tau = 1; tau <= d; ++tau) {
    out.begin_step(tau);
    bits.set_step(tau);
    em.flush_all();

    std::vector<std::size_t> items;
    for (std::size_t p = 0; p < seq.size(); ++p) {
      if (step[p] == tau) items.push_back(p);
    }

    // bind links and open the step's entanglement
    std::vector<char> node_busy(net.nodes.size(), 0);
    std::map<std::size_t, std::vector<std::pair<int, int>>> hops_of;
    for (std::size_t c = 0; c < comms.size(); ++c) {
      const Route& r = solution.routes[c];
      if (r.tau != tau) continue;
      std::vector<std::pair<int, int>> hops;
      for (std::size_t h = 0; h < r.edges.size(); ++h) {
        const int from = r.processors[h];
        const QuotientEdge& e = q.edges[r.edges[h]];
        bool bound = false;
        for (int l : e.links) {
          auto [x, y] = net.links[l];
          if (node_busy[x] || node_busy[y]) continue;
          if (net.nodes[x].processor != from) std::swap(x, y);
          node_busy[x] = node_busy[y] = 1;
          hops.emplace_back(wire_of(x), wire_of(y));
          bound = true;
          break;
        }
        if (!bound) {
          throw Error(ErrorKind::BindingFailure,
                      "no free link on " + q.names[e.a] + "-" + q.names[e.b] + " at step " +
                          std::to_string(tau));
        }
      }
      hops_of[c] = std::move(hops);
    }
    for (auto& [c, hops] : hops_of) {
      for (auto [u, v] : hops) em.raw(Op::e(u, v));
      result.stats.e_gates += hops.size();
    }
    std::map<std::size_t, PathEnds> ends_of;
    for (auto& [c, hops] : hops_of) {
      PathEnds ends{hops.front().first, hops.back().second, {}, {}};
      for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
        em.gate(Op::cx(hops[h].second, hops[h + 1].first));
        em.gate(Op::h(hops[h].second));
        int bz = bits.next(out);
        int bx = bits.next(out);
        em.measure(hops[h].second, bz);
        em.measure(hops[h + 1].first, bx);
        ends.z_expr ^= BitExpr::of(bz);
        ends.x_expr ^= BitExpr::of(bx);
        ++result.stats.swaps;
      }
      ends_of[c] = ends;
      em.correct(PauliKind::Z, ends.head, ends.z_expr);
      em.correct(PauliKind::X, ends.tail, ends.x_expr);
    }

    // merge plans: for telegate j, local gates to run after its pre-processing
    std::map<std::size_t, std::vector<std::size_t>> deferred;  // item index of j -> positions
    std::map<std::size_t, std::pair<Arm, Arm>> arms_of;
    std::vector<char> skip(items.size(), 0);
    for (std::size_t xj = 0; xj < items.size(); ++xj) {
      int j = predicate.commodity_at(items[xj]);
      if (j < 0) continue;
      const MergePlan* plan = nullptr;
      for (std::size_t xi = xj; xi-- > 0;) {
        int i = predicate.commodity_at(items[xi]);
        if (i < 0) continue;
        plan = predicate.plan(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (plan) break;
      }
      if (!plan || plan->moved.empty()) continue;
      std::size_t first = items.size();
      for (std::size_t x = 0; x < xj; ++x) {
        if (!skip[x] && std::find(plan->moved.begin(), plan->moved.end(), items[x]) != plan->moved.end()) {
          first = std::min(first, x);
        }
      }
      if (first == items.size()) continue;
      std::vector<char> wires(layered.num_qubits(), 0);
      std::vector<std::size_t> closure;
      bool ok = true;
      for (std::size_t x = first; x < xj && ok; ++x) {
        if (skip[x]) continue;
        const Gate& g = seq[items[x]];
        bool member = std::find(plan->moved.begin(), plan->moved.end(), items[x]) != plan->moved.end();
        member = member || wires[g.target] || (g.control >= 0 && wires[g.control]);
        if (!member) continue;
        if (predicate.commodity_at(items[x]) >= 0) ok = false;
        closure.push_back(x);
        wires[g.target] = 1;
        if (g.control >= 0) wires[g.control] = 1;
      }
      const auto& cj = comms[static_cast<std::size_t>(j)];
      // comm wires are bound later; negative placeholders never meet a logical gate
      Arm ctl = Arm::control(cj.control_qubit, -1);
      Arm tgt = Arm::target(cj.target_qubit, -2);
      for (std::size_t n = closure.size(); ok && n-- > 0;) {
        Op g = detail::logical_op(seq[items[closure[n]]]);
        const bool on_ctl = g.touches(ctl.comp);
        const bool on_tgt = g.touches(tgt.comp);
        if (on_ctl && on_tgt) {
          ok = false;
        } else if (on_ctl || on_tgt) {
          Arm& arm = on_ctl ? ctl : tgt;
          auto pre = arm.ops();
          auto r = push_backward(g, pre);
          if (!r) {
            ok = false;
          } else {
            arm = Arm::from_ops(arm.comp, arm.comm, r->pre);
          }
        }
      }
      if (!ok) {
        ++result.stats.merges_skipped;
        continue;
      }
      ++result.stats.merges_applied;
      for (auto x : closure) {
        skip[x] = 1;
        deferred[xj].push_back(items[x]);
      }
      arms_of[xj] = {ctl, tgt};
    }

    for (std::size_t x = 0; x < items.size(); ++x) {
      if (skip[x]) continue;
      const std::size_t p = items[x];
      int c = predicate.commodity_at(p);
      if (c < 0) {
        em.gate(detail::logical_op(seq[p]));
        continue;
      }
      const auto& com = comms[static_cast<std::size_t>(c)];
      const PathEnds& ends = ends_of.at(static_cast<std::size_t>(c));
      Arm ctl = Arm::control(com.control_qubit, ends.head);
      Arm tgt = Arm::target(com.target_qubit, ends.tail);
      if (auto it = arms_of.find(x); it != arms_of.end()) {
        ctl = it->second.first;
        tgt = it->second.second;
        ctl.comm = ends.head;
        tgt.comm = ends.tail;
      }
      for (const auto& op : ctl.ops()) em.gate(op);
      for (const auto& op : tgt.ops()) em.gate(op);
      int bw = bits.next(out);
      int br = bits.next(out);
      em.measure(ends.head, bw);
      em.measure(ends.tail, br);
      if (auto it = deferred.find(x); it != deferred.end()) {
        for (auto pos : it->second) em.gate(detail::logical_op(seq[pos]));
      }
      em.correct(PauliKind::Z, com.control_qubit, BitExpr::of(br));
      em.correct(PauliKind::X, com.target_qubit, BitExpr::of(bw));
    }
  }
  em.flush_all();
  result.stats.in_step_flushes = em.blocked_flushes();
  return result;
}

}  // namespace dqcc
