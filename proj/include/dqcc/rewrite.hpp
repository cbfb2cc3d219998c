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

#include <array>
#include <map>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dqcc/extended.hpp"

namespace dqcc {

enum class PauliKind { X, Z };

/// A pending X^expr or Z^expr on one wire.
struct PauliTerm {
  PauliKind kind = PauliKind::X;
  int qubit = -1;
  BitExpr expr;

  Op as_op() const { return kind == PauliKind::X ? Op::x(qubit, expr) : Op::z(qubit, expr); }
  bool operator==(const PauliTerm&) const = default;
};

enum class Rule : std::size_t {
  CxControlX,
  CxTargetZ,
  CxTargetX,
  CxControlZ,
  TZ,
  HX,
  HZ,
  BackTControl,
  BackSharedTarget,
  BackSharedControl,
  BackHH,
  BackHCxH,
  MeasureForward,
  MeasureAbsorbZ,
  Count_,
};

inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(Rule::Count_);

inline std::string_view to_string(Rule r) {
  constexpr std::array<std::string_view, kRuleCount> names = {
      "cx-control-x", "cx-target-z", "cx-target-x",        "cx-control-z",
      "t-z",          "h-x",         "h-z",                "back-t-control",
      "back-shared-target", "back-shared-control", "back-h-h", "back-h-cx-h",
      "measure-forward", "measure-absorb-z"};
  return names[static_cast<std::size_t>(r)];
}

struct RuleStats {
  std::array<std::size_t, kRuleCount> applied{};

  void note(Rule r) { ++applied[static_cast<std::size_t>(r)]; }
  std::size_t total() const {
    std::size_t s = 0;
    for (auto n : applied) s += n;
    return s;
  }
  std::size_t operator[](Rule r) const { return applied[static_cast<std::size_t>(r)]; }
  RuleStats& operator+=(const RuleStats& o) {
    for (std::size_t i = 0; i < kRuleCount; ++i) applied[i] += o.applied[i];
    return *this;
  }
};

/// Moves `p` from just before `gate` to just after it. Returns nullopt when
/// no rule applies. Gates not touching p's wire pass trivially.
inline std::optional<std::vector<PauliTerm>> push_forward(const PauliTerm& p, const Op& gate,
                                                          RuleStats* stats = nullptr) {
  auto note = [&](Rule r) {
    if (stats) stats->note(r);
  };
  if (!gate.touches(p.qubit)) return std::vector<PauliTerm>{p};
  const bool x = p.kind == PauliKind::X;
  switch (gate.kind) {
    case OpKind::CX:
      if (gate.a == p.qubit) {
        if (x) {
          note(Rule::CxControlX);
          return std::vector<PauliTerm>{p, {PauliKind::X, gate.b, p.expr}};
        }
        note(Rule::CxControlZ);
        return std::vector<PauliTerm>{p};
      }
      if (x) {
        note(Rule::CxTargetX);
        return std::vector<PauliTerm>{p};
      }
      note(Rule::CxTargetZ);
      return std::vector<PauliTerm>{{PauliKind::Z, gate.a, p.expr}, p};
    case OpKind::T:
      if (x) return std::nullopt;
      note(Rule::TZ);
      return std::vector<PauliTerm>{p};
    case OpKind::H:
      note(x ? Rule::HX : Rule::HZ);
      return std::vector<PauliTerm>{{x ? PauliKind::Z : PauliKind::X, p.qubit, p.expr}};
    case OpKind::X:
    case OpKind::Z:
      // Paulis commute up to a global phase.
      return std::vector<PauliTerm>{p};
    case OpKind::M:
      if (x) return std::nullopt;  // needs the bit rewrite, see forward_measurement_bit
      note(Rule::MeasureAbsorbZ);
      return std::vector<PauliTerm>{};
    case OpKind::E:
      return std::nullopt;
  }
  return std::nullopt;
}

/// Result of moving a local gate past a pre-processing block: the block
/// (`pre`) now comes first and `after` follows it.
struct BackwardResult {
  std::vector<Op> pre;
  Op after;
  Rule rule;
};

/// `gate` sits immediately before the pre-processing block `pre` (one CX,
/// optionally with an H before or after it on the wire `gate` does not touch)
/// and shares a wire with it.
inline std::optional<BackwardResult> push_backward(const Op& gate, std::span<const Op> pre,
                                                   RuleStats* stats = nullptr) {
  auto done = [&](std::vector<Op> p, Op after, Rule r) -> std::optional<BackwardResult> {
    if (stats) stats->note(r);
    return BackwardResult{std::move(p), std::move(after), r};
  };
  if (pre.empty()) return std::nullopt;
  std::size_t cx_at = pre.size();
  for (std::size_t i = 0; i < pre.size(); ++i) {
    if (pre[i].kind == OpKind::CX) {
      if (cx_at != pre.size()) return std::nullopt;
      cx_at = i;
    } else if (pre[i].kind != OpKind::H) {
      return std::nullopt;
    }
  }
  if (cx_at == pre.size()) return std::nullopt;
  const Op& cx = pre[cx_at];
  const bool h_before = cx_at == 1;
  const bool h_after = cx_at + 1 < pre.size();
  if (pre.size() > 2) return std::nullopt;
  std::vector<Op> block(pre.begin(), pre.end());

  switch (gate.kind) {
    case OpKind::T:
      if (gate.a == cx.a && !(h_before && pre[0].a == gate.a) && !(h_after && pre[1].a == gate.a)) {
        return done(block, gate, Rule::BackTControl);
      }
      return std::nullopt;
    case OpKind::CX: {
      const bool shares_target = gate.b == cx.b && gate.a != cx.a;
      const bool shares_control = gate.a == cx.a && gate.b != cx.b;
      if (gate.touches(cx.a) && gate.touches(cx.b)) return std::nullopt;
      for (const auto& h : pre) {
        if (h.kind == OpKind::H && gate.touches(h.a)) return std::nullopt;
      }
      if (shares_target && !gate.touches(cx.a)) return done(block, gate, Rule::BackSharedTarget);
      if (shares_control && !gate.touches(cx.b)) return done(block, gate, Rule::BackSharedControl);
      return std::nullopt;
    }
    case OpKind::H: {
      const int x = gate.a;
      if (!cx.touches(x)) return std::nullopt;
      const int y = cx.a == x ? cx.b : cx.a;
      Op rev = Op::cx(cx.b, cx.a);
      if (h_after && !h_before && pre[1].a == y) {
        // H_x CX H_y == H_y CX' H_x
        return done({Op::h(y), rev}, gate, Rule::BackHCxH);
      }
      if (h_before && !h_after && pre[0].a == y) {
        // H_x H_y CX == CX' H_x H_y
        return done({rev, Op::h(y)}, gate, Rule::BackHH);
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

/// Pending Pauli corrections keyed by (wire, kind). Terms on one wire of the
/// same kind merge by XOR of their exponents.
class PauliFrame {
 public:
  void add(const PauliTerm& t) {
    if (t.expr.empty()) return;
    auto& e = terms_[{t.qubit, t.kind}];
    e ^= t.expr;
    if (e.empty()) terms_.erase({t.qubit, t.kind});
  }

  bool empty() const { return terms_.empty(); }
  bool has(int q) const { return !on(q).empty(); }

  std::vector<PauliTerm> on(int q) const {
    std::vector<PauliTerm> out;
    for (auto kind : {PauliKind::X, PauliKind::Z}) {
      auto it = terms_.find({q, kind});
      if (it != terms_.end()) out.push_back({kind, q, it->second});
    }
    return out;
  }
  std::vector<PauliTerm> all() const {
    std::vector<PauliTerm> out;
    for (const auto& [key, e] : terms_) out.push_back({key.second, key.first, e});
    return out;
  }

  /// Removes and returns the terms on `q`.
  std::vector<PauliTerm> take(int q) {
    auto out = on(q);
    terms_.erase({q, PauliKind::X});
    terms_.erase({q, PauliKind::Z});
    return out;
  }

  /// Moves every term touching `gate` past it. On failure the frame is left
  /// untouched and false is returned.
  bool push(const Op& gate, RuleStats* stats = nullptr) {
    std::vector<PauliTerm> touched = on(gate.a);
    if (gate.two_qubit()) {
      auto more = on(gate.b);
      touched.insert(touched.end(), more.begin(), more.end());
    }
    if (touched.empty()) return true;
    RuleStats local;
    std::vector<PauliTerm> moved;
    for (const auto& t : touched) {
      auto r = push_forward(t, gate, &local);
      if (!r) return false;
      moved.insert(moved.end(), r->begin(), r->end());
    }
    take(gate.a);
    if (gate.two_qubit()) take(gate.b);
    for (const auto& t : moved) add(t);
    if (stats) *stats += local;
    return true;
  }

  bool operator==(const PauliFrame&) const = default;

 private:
  std::map<std::pair<int, PauliKind>, BitExpr> terms_;
};

/// Removes the X^expr at `x_index` (the next op on its wire must be a
/// measurement) and XORs expr into every later use of the measured bit.
inline void forward_measurement_bit(std::vector<Op>& ops, std::size_t x_index,
                                    RuleStats* stats = nullptr) {
  const Op x = ops.at(x_index);
  std::size_t m_index = x_index + 1;
  while (m_index < ops.size() && !(ops[m_index].touches(x.a))) ++m_index;
  if (x.kind != OpKind::X || m_index >= ops.size() || ops[m_index].kind != OpKind::M) {
    throw Error(ErrorKind::Syntax, "X is not followed by a measurement on its wire");
  }
  const int bit = ops[m_index].bit;
  for (std::size_t i = m_index + 1; i < ops.size(); ++i) {
    if (ops[i].is_pauli() && ops[i].expr.contains(bit)) ops[i].expr ^= x.expr;
  }
  ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(x_index));
  if (stats && !x.expr.empty()) stats->note(Rule::MeasureForward);
}

}  // namespace dqcc
