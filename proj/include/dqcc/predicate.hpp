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
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/extended.hpp"
#include "dqcc/rewrite.hpp"

namespace dqcc {

inline constexpr int kNever = std::numeric_limits<int>::max();

/// One half of a telegate's pre-processing: a CX between a computation qubit
/// and its communication qubit, possibly wrapped by an H on the latter.
struct Arm {
  int comp = -1;
  int comm = -1;
  bool comp_is_control = true;
  bool h_before = false;
  bool h_after = false;

  static Arm control(int q, int c) { return {q, c, true, false, false}; }
  static Arm target(int q, int c) { return {q, c, false, false, true}; }

  std::vector<Op> ops() const {
    std::vector<Op> out;
    if (h_before) out.push_back(Op::h(comm));
    out.push_back(comp_is_control ? Op::cx(comp, comm) : Op::cx(comm, comp));
    if (h_after) out.push_back(Op::h(comm));
    return out;
  }

  /// Reads back the shape produced by push_backward.
  static Arm from_ops(int comp, int comm, std::span<const Op> ops) {
    Arm a{comp, comm, true, false, false};
    bool seen_cx = false;
    for (const auto& op : ops) {
      if (op.kind == OpKind::CX) {
        a.comp_is_control = op.a == comp;
        seen_cx = true;
      } else {
        (seen_cx ? a.h_after : a.h_before) = true;
      }
    }
    return a;
  }

  bool operator==(const Arm&) const = default;
};

/// How two commodities i -> j share a time step: the local gates that move
/// behind j's pre-processing, j's rewritten arms, and the merged fragment the
/// plan was checked on.
struct MergePlan {
  std::size_t i = 0;
  std::size_t j = 0;
  int need = 0;
  std::vector<std::size_t> moved;  // gate positions in sequence order
  Arm control_arm;
  Arm target_arm;
  ExtendedCircuit fragment;
};

/// Decides quasi-parallelism. `need(i, j)` is the least coherence budget (in
/// layers of communication-qubit lifetime beyond a lone telegate) for which
/// the pair can share a step, or kNever.
class Predicate {
 public:
  Predicate(const LogicalCircuit& layered, std::vector<Commodity> commodities)
      : circuit_(layered), commodities_(std::move(commodities)) {
    for (auto ref : circuit_.ordered_refs()) {
      refs_.push_back(ref);
      seq_.push_back(circuit_.at(ref));
    }
    commodity_at_.assign(seq_.size(), -1);
    for (const auto& c : commodities_) {
      auto it = std::find(refs_.begin(), refs_.end(), c.gate);
      auto pos = static_cast<std::size_t>(it - refs_.begin());
      position_.push_back(pos);
      commodity_at_[pos] = static_cast<int>(c.index);
    }
  }

  const std::vector<Commodity>& commodities() const { return commodities_; }
  const std::vector<Gate>& sequence() const { return seq_; }
  const std::vector<GateRef>& refs() const { return refs_; }
  std::size_t position(std::size_t commodity) const { return position_.at(commodity); }
  int commodity_at(std::size_t pos) const { return commodity_at_.at(pos); }

  bool holds(std::size_t i, std::size_t j, int budget) { return need(i, j) <= budget; }

  int need(std::size_t i, std::size_t j) {
    ++calls_;
    if (position_.at(i) > position_.at(j)) std::swap(i, j);
    if (auto it = need_.find({i, j}); it != need_.end()) return it->second;
    int result = evaluate(i, j);
    need_[{i, j}] = result;
    return result;
  }

  const MergePlan* plan(std::size_t i, std::size_t j) const {
    auto it = plans_.find({i, j});
    return it == plans_.end() ? nullptr : &it->second;
  }

  /// Local gates strictly between i and j that i can influence and that can
  /// influence j, in sequence order.
  std::vector<std::size_t> region(std::size_t i, std::size_t j) const {
    const std::size_t a = position_.at(i);
    const std::size_t b = position_.at(j);
    std::vector<char> fwd(seq_.size(), 0);
    std::vector<char> live(circuit_.num_qubits(), 0);
    auto mark = [&](const Gate& g, std::vector<char>& set) {
      set[g.target] = 1;
      if (g.control >= 0) set[g.control] = 1;
    };
    auto hits = [&](const Gate& g, const std::vector<char>& set) {
      return set[g.target] || (g.control >= 0 && set[g.control]);
    };
    mark(seq_[a], live);
    for (std::size_t p = a + 1; p < b; ++p) {
      if (hits(seq_[p], live)) {
        fwd[p] = 1;
        mark(seq_[p], live);
      }
    }
    std::fill(live.begin(), live.end(), 0);
    mark(seq_[b], live);
    std::vector<std::size_t> out;
    for (std::size_t p = b; p-- > a + 1;) {
      if (hits(seq_[p], live)) {
        mark(seq_[p], live);
        if (fwd[p]) out.push_back(p);
      }
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  /// The logical gates the merge of i and j stands for: i, the region, j.
  LogicalCircuit logical_span(std::size_t i, std::size_t j) const {
    LogicalCircuit out(circuit_.qubits());
    out.append(seq_[position_.at(i)]);
    for (auto p : region(i, j)) out.append(seq_[p]);
    out.append(seq_[position_.at(j)]);
    return out;
  }

  std::size_t calls() const { return calls_; }
  const RuleStats& stats() const { return stats_; }
  void reset_counters() {
    calls_ = 0;
    stats_ = {};
  }

 private:
  int evaluate(std::size_t i, std::size_t j) {
    const auto& ci = commodities_[i];
    const auto& cj = commodities_[j];
    if (ci.layer == cj.layer) return 0;
    auto reg = region(i, j);
    std::vector<std::size_t> between;
    for (auto p : reg) {
      if (commodity_at_[p] >= 0) between.push_back(static_cast<std::size_t>(commodity_at_[p]));
    }
    if (!between.empty()) {
      // exact epsilon split: A(i,k,e*B) and A(k,j,(1-e)*B) iff need(i,k)+need(k,j) <= B
      std::size_t k = between[(between.size() - 1) / 2];
      int left = need(i, k);
      if (left == kNever) return kNever;
      int right = need(k, j);
      if (right == kNever) return kNever;
      return left + right;
    }
    const Gate& gi = seq_[position_[i]];
    const Gate& gj = seq_[position_[j]];
    if (reg.empty() && !gi.shares_qubit(gj)) return 0;
    return merge(i, j, reg);
  }

  static Op as_op(const Gate& g) {
    switch (g.kind) {
      case GateKind::H: return Op::h(g.target);
      case GateKind::T: return Op::t(g.target);
      case GateKind::CX: return Op::cx(g.control, g.target);
    }
    return Op::h(g.target);
  }

  int merge(std::size_t i, std::size_t j, const std::vector<std::size_t>& reg) {
    const auto& ci = commodities_[i];
    const auto& cj = commodities_[j];
    ExtendedCircuit f;
    for (const auto& q : circuit_.qubits()) f.add_wire(q);
    auto tag = [](std::size_t k, const char* role) { return "c" + std::to_string(k + 1) + role; };
    const int cwi = f.add_wire(tag(i, "w"), true, ci.control_proc);
    const int cri = f.add_wire(tag(i, "r"), true, ci.target_proc);
    const int cwj = f.add_wire(tag(j, "w"), true, cj.control_proc);
    const int crj = f.add_wire(tag(j, "r"), true, cj.target_proc);
    const int bwi = f.new_bit("b" + std::to_string(i + 1) + "w");
    const int bri = f.new_bit("b" + std::to_string(i + 1) + "r");
    const int bwj = f.new_bit("b" + std::to_string(j + 1) + "w");
    const int brj = f.new_bit("b" + std::to_string(j + 1) + "r");

    // j's pre-processing moves backward over as long a suffix as possible
    Arm ctl = Arm::control(cj.control_qubit, cwj);
    Arm tgt = Arm::target(cj.target_qubit, crj);
    std::size_t split = reg.size();
    while (split > 0) {
      Op g = as_op(seq_[reg[split - 1]]);
      const bool on_ctl = g.touches(ctl.comp);
      const bool on_tgt = g.touches(tgt.comp);
      if (on_ctl && on_tgt) break;
      if (on_ctl || on_tgt) {
        Arm& arm = on_ctl ? ctl : tgt;
        auto pre = arm.ops();
        auto r = push_backward(g, pre, &stats_);
        if (!r) break;
        arm = Arm::from_ops(arm.comp, arm.comm, r->pre);
      }
      --split;
    }

    // i's post-processing moves forward over the rest
    PauliFrame frame;
    frame.add({PauliKind::Z, ci.control_qubit, BitExpr::of(bri)});
    frame.add({PauliKind::X, ci.target_qubit, BitExpr::of(bwi)});
    for (std::size_t k = 0; k < split; ++k) {
      if (!frame.push(as_op(seq_[reg[k]]), &stats_)) return kNever;
    }
    std::vector<Op> jpre = ctl.ops();
    for (const auto& op : tgt.ops()) jpre.push_back(op);
    for (const auto& op : jpre) {
      if (!frame.push(op, &stats_)) return kNever;
    }
    Op corr_z = Op::z(cj.control_qubit, BitExpr::of(brj));
    Op corr_x = Op::x(cj.target_qubit, BitExpr::of(bwj));
    for (int comm : {cwj, crj}) {
      const int bit = comm == cwj ? bwj : brj;
      for (const auto& t : frame.take(comm)) {
        if (t.kind == PauliKind::Z) {
          stats_.note(Rule::MeasureAbsorbZ);
          continue;
        }
        stats_.note(Rule::MeasureForward);
        for (Op* c : {&corr_z, &corr_x}) {
          if (c->expr.contains(bit)) c->expr ^= t.expr;
        }
      }
    }

    f.push(Op::e(cwi, cri));
    f.push(Op::e(cwj, crj));
    f.push(Op::cx(ci.control_qubit, cwi));
    f.push(Op::cx(cri, ci.target_qubit));
    f.push(Op::h(cri));
    f.push(Op::m(cwi, bwi));
    f.push(Op::m(cri, bri));
    for (std::size_t k = 0; k < split; ++k) f.push(as_op(seq_[reg[k]]));
    for (const auto& op : jpre) f.push(op);
    f.push(Op::m(cwj, bwj));
    f.push(Op::m(crj, brj));
    for (const auto& t : frame.all()) f.push(t.as_op());
    for (std::size_t k = split; k < reg.size(); ++k) f.push(as_op(seq_[reg[k]]));
    if (!corr_z.expr.empty()) f.push(corr_z);
    if (!corr_x.expr.empty()) f.push(corr_x);

    int extension = 0;
    for (auto [comm, base] : {std::pair{cwi, 1}, {cri, 2}, {cwj, 1}, {crj, 2}}) {
      extension = std::max(extension, lifetime(f, comm) - base);
    }
    MergePlan plan;
    plan.i = i;
    plan.j = j;
    plan.need = extension;
    plan.moved.assign(reg.begin() + static_cast<std::ptrdiff_t>(split), reg.end());
    plan.control_arm = ctl;
    plan.target_arm = tgt;
    plan.fragment = std::move(f);
    plans_[{i, j}] = std::move(plan);
    return extension;
  }

  LogicalCircuit circuit_;
  std::vector<Commodity> commodities_;
  std::vector<Gate> seq_;
  std::vector<GateRef> refs_;
  std::vector<std::size_t> position_;
  std::vector<int> commodity_at_;
  std::map<std::pair<std::size_t, std::size_t>, int> need_;
  std::map<std::pair<std::size_t, std::size_t>, MergePlan> plans_;
  std::size_t calls_ = 0;
  RuleStats stats_;
};

}  // namespace dqcc
