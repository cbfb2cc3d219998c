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

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/error.hpp"
#include "dqcc/extended.hpp"

namespace dqcc {

using cplx = std::complex<double>;

class StateVector {
 public:
  explicit StateVector(int slots) : slots_(slots), amp_(std::size_t{1} << slots) { amp_[0] = 1.0; }

  int slots() const { return slots_; }
  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  void h(int q) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t m = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & m) continue;
      cplx a = amp_[i];
      cplx b = amp_[i | m];
      amp_[i] = r * (a + b);
      amp_[i | m] = r * (a - b);
    }
  }
  void t(int q) {
    const cplx w = std::polar(1.0, M_PI / 4.0);
    const std::size_t m = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & m) amp_[i] *= w;
    }
  }
  void x(int q) {
    const std::size_t m = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (!(i & m)) std::swap(amp_[i], amp_[i | m]);
    }
  }
  void z(int q) {
    const std::size_t m = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & m) amp_[i] = -amp_[i];
    }
  }
  void cx(int c, int t) {
    const std::size_t mc = std::size_t{1} << c;
    const std::size_t mt = std::size_t{1} << t;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if ((i & mc) && !(i & mt)) std::swap(amp_[i], amp_[i | mt]);
    }
  }

  double probability_one(int q) const {
    const std::size_t m = std::size_t{1} << q;
    double p = 0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & m) p += std::norm(amp_[i]);
    }
    return p;
  }

  /// Projects onto `outcome`, renormalizes and resets the qubit to |0>.
  void collapse(int q, int outcome, double prob) {
    const std::size_t m = std::size_t{1} << q;
    const double s = 1.0 / std::sqrt(prob);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      bool one = (i & m) != 0;
      if (one != (outcome == 1)) {
        amp_[i] = 0;
      } else {
        amp_[i] *= s;
      }
    }
    if (outcome == 1) x(q);
  }

 private:
  int slots_;
  std::vector<cplx> amp_;
};

struct SimOptions {
  int max_slots = 14;
  int exhaustive_measurements = 16;  // above this, branches are sampled
  int sampled_branches = 64;
  std::uint64_t seed = 20260101;
};

struct StateBranch {
  std::vector<cplx> amplitudes;  // over base slots, then live comm wires (by wire index)
  std::vector<int> bits;         // -1 when the bit was never written
  double probability = 1.0;
};

struct RunResult {
  std::vector<StateBranch> branches;
  std::vector<int> live_comm;  // comm wires still holding a qubit at the end
  bool sampled = false;
};

namespace detail {

/// Slot plan: computation wires are pinned to slots [0, n_comp); `extra`
/// slots follow (the reference register); communication wires take the
/// remaining slots, materialized lazily on first touch after their E.
struct SlotPlan {
  std::vector<int> comp_slot;  // per wire, -1 for comm wires
  int base = 0;
  int total = 0;
};

inline SlotPlan plan_slots(const ExtendedCircuit& c, int extra, int max_slots) {
  SlotPlan plan;
  plan.comp_slot.assign(c.num_wires(), -1);
  int n = 0;
  for (int w : c.computation_wires()) plan.comp_slot[w] = n++;
  plan.base = n + extra;
  // peak number of simultaneously materialized comm qubits
  std::vector<int> state(c.num_wires(), 0);  // 0 dead, 1 pending, 2 live
  std::vector<int> partner(c.num_wires(), -1);
  int live = 0;
  int peak = 0;
  auto touch = [&](int w) {
    if (plan.comp_slot[w] >= 0) return;
    if (state[w] == 1) {
      state[w] = state[partner[w]] = 2;
      live += 2;
      peak = std::max(peak, live);
    } else if (state[w] == 0) {
      throw Error(ErrorKind::ConsumedQubit, "'" + c.wires()[w].name + "' used without a live pair");
    }
  };
  for (const auto& op : c.ops()) {
    if (op.kind == OpKind::E) {
      for (int w : {op.a, op.b}) {
        if (plan.comp_slot[w] >= 0) {
          throw Error(ErrorKind::ConsumedQubit, "E on computation wire '" + c.wires()[w].name + "'");
        }
        if (state[w] != 0) {
          throw Error(ErrorKind::ConsumedQubit, "E on live wire '" + c.wires()[w].name + "'");
        }
      }
      state[op.a] = state[op.b] = 1;
      partner[op.a] = op.b;
      partner[op.b] = op.a;
      continue;
    }
    touch(op.a);
    if (op.two_qubit()) touch(op.b);
    if (op.kind == OpKind::M && plan.comp_slot[op.a] < 0) {
      state[op.a] = 0;
      --live;
    }
  }
  // pairs never touched after their E are materialized at the end
  live += static_cast<int>(std::count(state.begin(), state.end(), 1));
  peak = std::max(peak, live);
  plan.total = plan.base + peak;
  if (plan.total > max_slots) {
    throw Error(ErrorKind::QubitBudgetExceeded,
                std::to_string(plan.total) + " slots needed, budget " + std::to_string(max_slots));
  }
  return plan;
}

class Runner {
 public:
  Runner(const ExtendedCircuit& c, const SlotPlan& plan, const SimOptions& opt)
      : c_(c), plan_(plan), opt_(opt), rng_(opt.seed) {
    measurements_ = static_cast<int>(c.count(OpKind::M));
    sampled_ = measurements_ > opt.exhaustive_measurements;
  }

  RunResult run(StateVector initial) {
    RunResult result;
    result.sampled = sampled_;
    Frame f{std::move(initial), std::vector<int>(c_.num_bits(), -1), 1.0,
            std::vector<int>(c_.num_wires(), -1), std::vector<int>(c_.num_wires(), -1), {}};
    for (std::size_t w = 0; w < c_.num_wires(); ++w) f.slot[w] = plan_.comp_slot[w];
    for (int s = plan_.total - 1; s >= plan_.base; --s) f.free.push_back(s);
    if (sampled_) {
      for (int n = 0; n < opt_.sampled_branches; ++n) step(Frame(f), 0, result);
    } else {
      step(std::move(f), 0, result);
    }
    return result;
  }

 private:
  struct Frame {
    StateVector sv;
    std::vector<int> bits;
    double prob;
    std::vector<int> slot;     // live slot per wire
    std::vector<int> pending;  // partner wire of a not yet materialized E
    std::vector<int> free;
  };

  int slot_of(Frame& f, int w) {
    if (f.slot[w] >= 0) return f.slot[w];
    int p = f.pending[w];
    if (p < 0) throw Error(ErrorKind::ConsumedQubit, "'" + c_.wires()[w].name + "'");
    int s1 = f.free.back();
    f.free.pop_back();
    int s2 = f.free.back();
    f.free.pop_back();
    f.sv.h(s1);
    f.sv.cx(s1, s2);
    f.slot[w] = s1;
    f.slot[p] = s2;
    f.pending[w] = f.pending[p] = -1;
    return s1;
  }

  void step(Frame f, std::size_t pc, RunResult& out) {
    for (; pc < c_.ops().size(); ++pc) {
      const Op& op = c_.ops()[pc];
      switch (op.kind) {
        case OpKind::E:
          f.pending[op.a] = op.b;
          f.pending[op.b] = op.a;
          break;
        case OpKind::H: f.sv.h(slot_of(f, op.a)); break;
        case OpKind::T: f.sv.t(slot_of(f, op.a)); break;
        case OpKind::CX: {
          int a = slot_of(f, op.a);
          f.sv.cx(a, slot_of(f, op.b));
          break;
        }
        case OpKind::X:
          if (op.expr.eval(f.bits)) f.sv.x(slot_of(f, op.a));
          break;
        case OpKind::Z:
          if (op.expr.eval(f.bits)) f.sv.z(slot_of(f, op.a));
          break;
        case OpKind::M: {
          int s = slot_of(f, op.a);
          double p1 = f.sv.probability_one(s);
          auto release = [&](Frame& g) {
            if (plan_.comp_slot[op.a] < 0) {
              g.free.push_back(s);
              g.slot[op.a] = -1;
            }
          };
          if (sampled_) {
            int outcome = std::bernoulli_distribution(std::clamp(p1, 0.0, 1.0))(rng_) ? 1 : 0;
            double p = outcome ? p1 : 1.0 - p1;
            f.sv.collapse(s, outcome, p);
            f.bits.at(op.bit) = outcome;
            f.prob *= p;
            release(f);
            break;
          }
          constexpr double eps = 1e-14;
          if (p1 > eps) {
            Frame g = (1.0 - p1 > eps) ? f : std::move(f);
            g.sv.collapse(s, 1, p1);
            g.bits.at(op.bit) = 1;
            g.prob *= p1;
            release(g);
            step(std::move(g), pc + 1, out);
            if (1.0 - p1 <= eps) return;
          }
          f.sv.collapse(s, 0, 1.0 - p1);
          f.bits.at(op.bit) = 0;
          f.prob *= 1.0 - p1;
          release(f);
          break;
        }
      }
    }
    finish(std::move(f), out);
  }

  void finish(Frame f, RunResult& out) {
    std::vector<int> live;
    for (std::size_t w = 0; w < c_.num_wires(); ++w) {
      if (plan_.comp_slot[w] >= 0) continue;
      if (f.pending[w] >= 0) slot_of(f, static_cast<int>(w));
      if (f.slot[w] >= 0) live.push_back(static_cast<int>(w));
    }
    if (out.branches.empty()) out.live_comm = live;
    // reorder: base slots keep their position, live comm wires follow in wire order
    const int width = plan_.base + static_cast<int>(live.size());
    std::vector<cplx> amps(std::size_t{1} << width);
    const auto& src = f.sv.amplitudes();
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] == cplx{}) continue;
      std::size_t j = i & ((std::size_t{1} << plan_.base) - 1);
      std::size_t used = j;
      for (std::size_t k = 0; k < live.size(); ++k) {
        std::size_t m = std::size_t{1} << f.slot[live[k]];
        used |= m;
        if (i & m) j |= std::size_t{1} << (plan_.base + k);
      }
      if ((i & ~used) != 0) {
        if (std::abs(src[i]) > 1e-9) {
          throw Error(ErrorKind::ConsumedQubit, "released slot left in a nonzero state");
        }
        continue;
      }
      amps[j] = src[i];
    }
    out.branches.push_back({std::move(amps), std::move(f.bits), f.prob});
  }

  const ExtendedCircuit& c_;
  const SlotPlan& plan_;
  const SimOptions& opt_;
  std::mt19937_64 rng_;
  int measurements_ = 0;
  bool sampled_ = false;
};

}  // namespace detail

/// Runs `circuit` on `input`, a state over its computation wires (in wire
/// order). Every measurement outcome with nonzero probability is explored.
inline RunResult run(const ExtendedCircuit& circuit, const std::vector<cplx>& input,
                     const SimOptions& opt = {}) {
  auto plan = detail::plan_slots(circuit, 0, opt.max_slots);
  if (input.size() != (std::size_t{1} << plan.base)) {
    throw Error(ErrorKind::QubitBudgetExceeded, "input size does not match computation wires");
  }
  StateVector sv(plan.total);
  std::copy(input.begin(), input.end(), sv.amplitudes().begin());
  detail::Runner r(circuit, plan, opt);
  return r.run(std::move(sv));
}

struct EquivalenceReport {
  bool equivalent = false;
  double max_dev = 0.0;
  std::size_t branches = 0;
  bool sampled_inputs = false;    // fallback to basis plus random inputs
  bool sampled_branches = false;  // too many measurements to enumerate
  std::uint64_t seed = 0;
  std::string reason;
};

namespace detail {

/// Permutation of `lhs` computation wires and live comm wires onto the order
/// used by `rhs`, matched by name.
inline std::vector<int> match_wires(const ExtendedCircuit& lhs, const ExtendedCircuit& rhs) {
  auto lc = lhs.computation_wires();
  auto rc = rhs.computation_wires();
  if (lc.size() != rc.size()) return {};
  std::vector<int> perm;  // perm[k] = lhs position matching rhs position k
  for (int w : rc) {
    auto it = std::find_if(lc.begin(), lc.end(), [&](int v) {
      return lhs.wires()[v].name == rhs.wires()[w].name;
    });
    if (it == lc.end()) return {};
    perm.push_back(static_cast<int>(it - lc.begin()));
  }
  return perm;
}

inline std::vector<cplx> permute_qubits(const std::vector<cplx>& v, const std::vector<int>& to) {
  // qubit k of the input moves to position to[k]
  std::vector<cplx> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < to.size(); ++k) {
      if (i & (std::size_t{1} << k)) j |= std::size_t{1} << to[k];
    }
    out[j] = v[i];
  }
  return out;
}

inline double overlap_dev(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx ip = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ip += std::conj(a[i]) * b[i];
  return std::max(0.0, 1.0 - std::abs(ip));
}

}  // namespace detail

/// Process-level equivalence of two extended circuits over the same named
/// computation wires. Communication wires still live at the end take part in
/// the comparison (matched by name). `rhs` must act deterministically.
inline EquivalenceReport equivalent(const ExtendedCircuit& lhs, const ExtendedCircuit& rhs,
                                    double tol = 1e-9, const SimOptions& opt = {}) {
  EquivalenceReport rep;
  rep.seed = opt.seed;
  auto perm = detail::match_wires(lhs, rhs);
  const int n = static_cast<int>(rhs.computation_wires().size());
  if (static_cast<int>(perm.size()) != n) {
    rep.reason = "computation wires differ";
    return rep;
  }
  std::vector<std::vector<cplx>> inputs;  // each over 2n (reference) or n qubits
  int extra = n;
  try {
    detail::plan_slots(lhs, extra, opt.max_slots);
    detail::plan_slots(rhs, extra, opt.max_slots);
    std::vector<cplx> bell(std::size_t{1} << (2 * n));
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) bell[i | (i << n)] = 1.0;
    for (auto& a : bell) a /= std::sqrt(static_cast<double>(std::size_t{1} << n));
    inputs.push_back(std::move(bell));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::QubitBudgetExceeded) throw;
    extra = 0;
    rep.sampled_inputs = true;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
      std::vector<cplx> v(std::size_t{1} << n);
      v[i] = 1.0;
      inputs.push_back(std::move(v));
    }
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> g;
    for (int r = 0; r < 8; ++r) {
      std::vector<cplx> v(std::size_t{1} << n);
      double norm = 0;
      for (auto& a : v) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
      }
      for (auto& a : v) a /= std::sqrt(norm);
      inputs.push_back(std::move(v));
    }
  }
  auto lplan = detail::plan_slots(lhs, extra, opt.max_slots);
  auto rplan = detail::plan_slots(rhs, extra, opt.max_slots);
  std::vector<int> to(static_cast<std::size_t>(n + extra));
  for (int k = 0; k < n; ++k) to[perm[k]] = k;  // lhs position perm[k] -> rhs position k
  for (int k = n; k < n + extra; ++k) to[k] = n + perm[k - n];
  for (const auto& in : inputs) {
    auto start = [&](const detail::SlotPlan& plan, const std::vector<cplx>& v) {
      StateVector sv(plan.total);
      std::copy(v.begin(), v.end(), sv.amplitudes().begin());
      return sv;
    };
    detail::Runner rr(rhs, rplan, opt);
    auto ref = rr.run(start(rplan, in));
    // lhs wires are ordered differently: feed it the permuted input
    std::vector<int> inv(to.size());
    for (std::size_t k = 0; k < to.size(); ++k) inv[to[k]] = static_cast<int>(k);
    detail::Runner lr(lhs, lplan, opt);
    auto got = lr.run(start(lplan, detail::permute_qubits(in, inv)));
    rep.sampled_branches = rep.sampled_branches || got.sampled || ref.sampled;
    std::vector<std::string> lnames, rnames;
    for (int w : got.live_comm) lnames.push_back(lhs.wires()[w].name);
    for (int w : ref.live_comm) rnames.push_back(rhs.wires()[w].name);
    if (lnames != rnames) {
      rep.reason = "live communication qubits differ";
      rep.max_dev = 1.0;
      return rep;
    }
    std::vector<int> full = to;
    for (std::size_t k = 0; k < lnames.size(); ++k) full.push_back(static_cast<int>(to.size() + k));
    const auto& target = ref.branches.front().amplitudes;
    for (const auto& b : ref.branches) {
      rep.max_dev = std::max(rep.max_dev, detail::overlap_dev(target, b.amplitudes));
    }
    for (const auto& b : got.branches) {
      rep.max_dev = std::max(rep.max_dev,
                             detail::overlap_dev(target, detail::permute_qubits(b.amplitudes, full)));
      ++rep.branches;
    }
  }
  rep.equivalent = rep.max_dev <= tol;
  if (!rep.equivalent && rep.reason.empty()) rep.reason = "state deviation";
  return rep;
}

inline EquivalenceReport equivalent(const ExtendedCircuit& physical, const LogicalCircuit& logical,
                                    double tol = 1e-9, const SimOptions& opt = {}) {
  return equivalent(physical, to_extended(logical), tol, opt);
}

}  // namespace dqcc
