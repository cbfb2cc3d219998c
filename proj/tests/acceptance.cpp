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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "protocols.hpp"
#include "rule_cases.hpp"
#include "support.hpp"

using namespace dqcc;
using namespace dqcc::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

// Every solution produced anywhere in the suite goes through the standalone
// checker; the last criterion reports the totals.
struct Audit {
  std::size_t solutions = 0;
  std::size_t violations = 0;
  std::string first;

  void check(const QuotientGraph& q, std::span<const Commodity> comms, const RelationTable& rel,
             const Solution& s) {
    if (comms.empty()) return;
    ++solutions;
    auto bad = check_solution(q, comms, rel, s.d, to_flow_vars(q, s));
    violations += bad.size();
    if (!bad.empty() && first.empty()) first = bad.front();
  }
  void check(const CompileResult& r) { check(r.quotient, r.commodities, r.relations, r.solution); }
} audit;

int ceil_log2(std::size_t k) {
  int r = 0;
  while ((std::size_t{1} << r) < k) ++r;
  return r;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const char* kFourQubit =
    "qubits q1 q2 q3 q4\ncx q3 q1\ncx q3 q2\nh q3\ncx q3 q4\nt q2\nt q3\nh q4\ncx q2 q3\ncx q3 q4\n";

Outcome worst_case_placement() {
  Outcome o;
  auto net = parse_network(spread_network(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}));
  CompileOptions opt;
  opt.enable_qp = false;
  auto t0 = std::chrono::steady_clock::now();
  auto r = compile(parse_circuit(kFourQubit), net, opt);
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  audit.check(r);
  o.require(r.commodities.size() == 5, "expected 5 remote gates");
  o.require(r.solution.d == 5, "E-depth " + std::to_string(r.solution.d));
  o.require(r.physical && r.physical->circuit.steps().size() == 5, "physical steps differ");
  o.require(s < 1.0, "took " + fmt(s) + " s");
  if (o.pass) o.detail = "k=5 d=5 in " + fmt(s * 1e3) + " ms";
  return o;
}

Outcome two_processor_layer() {
  Outcome o;
  int cases = 0;
  for (int k = 1; k <= 6; ++k) {
    std::string src = "qubits";
    for (int i = 1; i <= 6; ++i) src += " a" + std::to_string(i) + " b" + std::to_string(i);
    src += "\n";
    for (int i = 1; i <= k; ++i) {
      auto a = "a" + std::to_string(i);
      auto b = "b" + std::to_string(i);
      src += i % 2 ? "cx " + a + " " + b + "\n" : "cx " + b + " " + a + "\n";
    }
    for (int c = 1; c <= 6; ++c) {
      CompileOptions opt;
      opt.emit_physical = false;
      auto r = compile(parse_circuit(src), parse_network(two_processor_network(6, c)), opt);
      audit.check(r);
      auto oracle = brute_force_oracle(r.quotient, r.commodities, r.relations, 6, 6);
      std::string tag = "k=" + std::to_string(k) + " c=" + std::to_string(c);
      o.require(oracle.has_value(), tag + ": oracle infeasible");
      if (!oracle) continue;
      o.require(r.solution.d == oracle->d && r.solution.total_flow == oracle->total_flow,
                tag + ": solver (" + std::to_string(r.solution.d) + ") vs oracle (" +
                    std::to_string(oracle->d) + ")");
      o.require(r.solution.d == (k + c - 1) / c, tag + ": not ceil(k/c)");
      if (c >= k) o.require(r.solution.d == 1, tag + ": expected 1");
      if (c == 1) o.require(r.solution.d == k, tag + ": expected k");
      ++cases;
    }
  }
  if (o.pass) o.detail = std::to_string(cases) + " (k, c) pairs match the oracle";
  return o;
}

Outcome conflict_chain() {
  Outcome o;
  for (int k : {3, 4, 5}) {
    std::string src = "qubits a1 b1\n";
    for (int i = 0; i < k; ++i) src += i % 2 ? "cx b1 a1\n" : "cx a1 b1\n";
    auto net = parse_network(two_processor_network(1, k));
    CompileOptions off;
    off.enable_qp = false;
    off.verify = true;
    CompileOptions on = off;
    on.enable_qp = true;
    on.coherence = 4 * k;
    auto a = compile(parse_circuit(src), net, off);
    auto b = compile(parse_circuit(src), net, on);
    audit.check(a);
    audit.check(b);
    std::string tag = "k=" + std::to_string(k);
    o.require(a.solution.d == k, tag + ": sequential d=" + std::to_string(a.solution.d));
    o.require(b.solution.d == 1, tag + ": merged d=" + std::to_string(b.solution.d));
    o.require(a.verification->equivalent && b.verification->equivalent, tag + ": schedule not equivalent");
  }
  if (o.pass) o.detail = "d=k without merging, d=1 with it, k=3..5";
  return o;
}

// Random solver instances shared by the optimality and call-bound criteria.
struct SolverCase {
  QuotientGraph q;
  std::vector<Commodity> comms;
  RelationTable rel;
};

std::vector<SolverCase> solver_suite(std::size_t want) {
  std::mt19937_64 rng(20260101);
  std::vector<SolverCase> out;
  while (out.size() < want) {
    const int n = 2 + static_cast<int>(rng() % 3);
    std::vector<std::tuple<int, int, int>> caps;
    std::set<std::pair<int, int>> used;
    for (int p = 1; p < n; ++p) {
      int a = static_cast<int>(rng() % p);
      caps.emplace_back(a, p, 1 + static_cast<int>(rng() % 2));
      used.insert({a, p});
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (!used.contains({a, b}) && rng() % 3 == 0) caps.emplace_back(a, b, 1 + static_cast<int>(rng() % 2));
      }
    }
    std::vector<std::string> names;
    for (int p = 0; p < n; ++p) names.push_back("P" + std::to_string(p + 1));
    auto q = QuotientGraph::from_capacities(names, caps);

    const int nq = 2 + static_cast<int>(rng() % 4);
    std::vector<std::string> qubits;
    for (int i = 0; i < nq; ++i) qubits.push_back("q" + std::to_string(i));
    auto layered = layerize(parse_circuit(random_circuit(qubits, 2 + static_cast<int>(rng() % 7), rng, 60)));
    std::vector<int> place(nq);
    for (auto& p : place) p = static_cast<int>(rng() % n);
    auto comms = extract_commodities(layered, place);
    if (comms.empty() || comms.size() > 4) continue;
    Predicate pred(layered, comms);
    auto rel = build_relations(comms, pred, static_cast<int>(rng() % 4), rng() % 3 != 0);
    out.push_back({std::move(q), std::move(comms), std::move(rel)});
  }
  return out;
}

const std::vector<SolverCase>& suite() {
  static const auto s = solver_suite(240);
  return s;
}

Outcome solver_optimality() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t qp_steps = 0;
  for (std::size_t n = 0; n < suite().size(); ++n) {
    const auto& c = suite()[n];
    auto s = quickest(c.q, c.comms, c.rel);
    audit.check(c.q, c.comms, c.rel, s);
    auto oracle = brute_force_oracle(c.q, c.comms, c.rel);
    std::string tag = "instance " + std::to_string(n);
    o.require(oracle.has_value(), tag + ": oracle infeasible");
    if (!oracle) continue;
    o.require(s.d == oracle->d && s.total_flow == oracle->total_flow,
              tag + ": (" + std::to_string(s.d) + ", " + std::to_string(s.total_flow) + ") vs (" +
                  std::to_string(oracle->d) + ", " + std::to_string(oracle->total_flow) + ")");
    for (std::size_t i = 0; i < c.comms.size(); ++i) {
      for (std::size_t j = i + 1; j < c.comms.size(); ++j) {
        if (c.rel.precedes(i, j) && s.routes[i].tau == s.routes[j].tau) ++qp_steps;
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 60, "took " + fmt(secs) + " s");
  if (o.pass) {
    o.detail = std::to_string(suite().size()) + " instances agree, " + std::to_string(qp_steps) +
               " ordered pairs share a step, " + fmt(secs) + " s";
  }
  return o;
}

Outcome call_bound() {
  Outcome o;
  std::size_t worst = 0;
  for (std::size_t n = 0; n < suite().size(); ++n) {
    const auto& c = suite()[n];
    SolveStats stats;
    quickest(c.q, c.comms, c.rel, &stats);
    const std::size_t bound = static_cast<std::size_t>(ceil_log2(c.comms.size()) + 1);
    o.require(stats.invocations <= bound, "instance " + std::to_string(n) + ": " +
                                              std::to_string(stats.invocations) + " calls for k=" +
                                              std::to_string(c.comms.size()));
    worst = std::max(worst, stats.invocations);
  }
  if (o.pass) o.detail = "at most " + std::to_string(worst) + " fixed-horizon solves per instance";
  return o;
}

Outcome rule_soundness() {
  Outcome o;
  double worst = 0;
  for (const auto& c : rule_cases()) {
    std::string name(to_string(c.rule));
    o.require(c.applied, name + " did not fire");
    o.require(c.dev <= 1e-9, name + " deviates by " + fmt(c.dev));
    worst = std::max(worst, c.dev);
  }
  if (o.pass) o.detail = std::to_string(kRuleCount) + " rules, max deviation " + fmt(worst);
  return o;
}

Outcome protocol_equivalences() {
  using namespace protocols;
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  int checked = 0;
  double worst = 0;
  auto expect = [&](const std::string& name, const std::string& physical, const std::string& ref, bool logical) {
    auto lhs = parse_physical(physical);
    auto rep = logical ? equivalent(lhs, parse_circuit(ref), 1e-9) : equivalent(lhs, parse_physical(ref), 1e-9);
    o.require(rep.equivalent, name + ": " + rep.reason + " (" + fmt(rep.max_dev) + ")");
    worst = std::max(worst, rep.max_dev);
    ++checked;
  };
  expect("telegate", kTelegate, kTelegateLogical, true);
  expect("swap", kSwap, kBellUR, false);
  expect("telegate over a swap", rcx_with_swap("bv2^bv4", "bv1^bv3"), kRcxLogical, true);
  expect("conflicting pair, sequential", kConflictSequential, kConflictLogical, true);
  expect("conflicting pair, merged", kConflictMerged, kConflictLogical, true);
  expect("merged vs sequential", kConflictMerged, kConflictSequential, false);
  expect("three-way merge", three_way_merge("b3^b5"), kThreeWayLogical, true);
  expect("two swaps in sequence", kNaivePath, kBellEnds, false);
  expect("two swaps in parallel", kBasePath, kBellEnds, false);
  for (int m = 3; m <= 5; ++m) {
    expect("path step, unfolded", inductive_path(m, false), bell_ends(m), false);
    expect("path step, folded", inductive_path(m, true), bell_ends(m), false);
  }
  for (int m = 1; m <= 4; ++m) {
    expect("remote CX over a path, unfolded", generalized_rcx(m, false), kRemoteLogical, true);
    expect("remote CX over a path, folded", generalized_rcx(m, true), kRemoteLogical, true);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 30, "took " + fmt(secs) + " s");
  if (o.pass) o.detail = std::to_string(checked) + " equivalences, max deviation " + fmt(worst) + ", " + fmt(secs) + " s";
  return o;
}

Outcome path_depth() {
  Outcome o;
  for (int m = 2; m <= 8; ++m) {
    auto f = entanglement_path_fragment(m);
    o.require(f.depth() == 5, "m=" + std::to_string(m) + ": depth " + std::to_string(f.depth()));
  }
  if (o.pass) o.detail = "depth 5 for m=2..8";
  return o;
}

Outcome end_to_end() {
  Outcome o;
  std::mt19937_64 rng(42);
  struct Target {
    std::string network;
    std::vector<std::string> qubits;
  };
  std::vector<Target> targets{
      {kToyNetwork, {"q1", "q3", "q4"}},
      {kToyNetwork, {"q1", "q2", "q3", "q4"}},
      {kToyNetwork, {"q2", "q3", "q5", "q6"}},
      {spread_network(3, {{0, 1, 1}, {1, 2, 2}}), {"q1", "q2", "q3"}},
      {spread_network(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}), {"q1", "q2", "q3", "q4"}},
      {spread_network(4, {{0, 1, 2}, {0, 2, 1}, {0, 3, 1}}), {"q1", "q2", "q3", "q4"}},
      {two_processor_network(2, 2), {"a1", "a2", "b1", "b2"}},
      {two_processor_network(3, 1), {"a1", "a2", "a3", "b1", "b2"}},
  };
  std::vector<std::pair<std::string, std::string>> fixed{
      {protocols::kConflictLogical, spread_network(3, {{0, 1, 1}, {1, 2, 1}})},
      {"qubits q1 q2 q3\ncx q1 q2\ncx q2 q3\ncx q3 q2\n", spread_network(3, {{0, 1, 1}, {1, 2, 1}})},
      {protocols::kThreeWayLogical, spread_network(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})},
      {"qubits a1 b1\ncx a1 b1\ncx b1 a1\ncx a1 b1\n", two_processor_network(1, 3)},
  };
  std::size_t compiled = 0;
  std::size_t merged = 0;
  std::size_t exhaustive = 0;
  double worst = 0;
  auto one = [&](const std::string& src, const std::string& network, int budget, bool qp) {
    CompileOptions opt;
    opt.coherence = budget;
    opt.enable_qp = qp;
    opt.verify = true;
    auto r = compile(parse_circuit(src), parse_network(network), opt);
    audit.check(r);
    ++compiled;
    const auto& v = *r.verification;
    o.require(v.equivalent, "not equivalent (" + fmt(v.max_dev) + "):\n" + src);
    worst = std::max(worst, v.max_dev);
    if (!v.sampled_inputs && !v.sampled_branches) ++exhaustive;
    bool shared = false;
    for (std::size_t i = 0; i < r.commodities.size(); ++i) {
      for (std::size_t j = i + 1; j < r.commodities.size(); ++j) {
        shared = shared || (r.relations.precedes(i, j) && r.solution.routes[i].tau == r.solution.routes[j].tau);
      }
    }
    if (shared) ++merged;
  };
  for (const auto& [src, net] : fixed) {
    for (int budget : {0, 1, 2, 4}) one(src, net, budget, true);
  }
  for (int round = 0; round < 48; ++round) {
    const auto& t = targets[round % targets.size()];
    auto src = random_circuit(t.qubits, 3 + static_cast<int>(rng() % 4), rng, 60);
    int budget = static_cast<int>(rng() % 4);
    one(src, t.network, budget, round % 4 != 0);
  }
  o.require(merged > 0, "no schedule merged an ordered pair");
  if (o.pass) {
    o.detail = std::to_string(compiled) + " schedules equivalent (" + std::to_string(exhaustive) +
               " exhaustive, " + std::to_string(merged) + " with merged pairs), max deviation " + fmt(worst);
  }
  return o;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, std::size_t from, std::size_t to) {
  double n = static_cast<double>(to - from);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = from; i < to; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome predicate_growth() {
  Outcome o;
  std::vector<double> xs;
  std::vector<double> rules;
  for (int n = 1; n <= 64; ++n) {
    // half the gates are pushed forward by the first telegate's corrections,
    // the rest move behind the second telegate's pre-processing
    std::string src = "qubits q0 q1 q2\ncx q0 q1\n";
    for (int g = 0; g < n; ++g) src += g < (n + 1) / 2 ? "h q1\n" : "t q1\n";
    src += "cx q1 q2\n";
    auto layered = layerize(parse_circuit(src));
    std::vector<int> place{0, 1, 2};
    Predicate p(layered, extract_commodities(layered, place));
    o.require(p.need(0, 1) != kNever, "n=" + std::to_string(n) + ": pair never merges");
    xs.push_back(n);
    rules.push_back(static_cast<double>(p.stats().total()));
  }
  double all = fit_slope(xs, rules, 0, xs.size());
  double low = fit_slope(xs, rules, 0, xs.size() / 2);
  double high = fit_slope(xs, rules, xs.size() / 2, xs.size());
  o.require(all > 0, "rule count does not grow");
  o.require(std::abs(low - all) <= 0.1 * all && std::abs(high - all) <= 0.1 * all,
            "slopes " + fmt(low) + " / " + fmt(high) + " vs " + fmt(all));

  std::size_t calls_at_max = 0;
  for (int m = 1; m <= 32; ++m) {
    std::string src = "qubits";
    for (int q = 0; q <= m + 2; ++q) src += " q" + std::to_string(q);
    src += "\n";
    for (int q = 0; q <= m + 1; ++q) src += "cx q" + std::to_string(q) + " q" + std::to_string(q + 1) + "\n";
    auto layered = layerize(parse_circuit(src));
    std::vector<int> place(layered.num_qubits());
    for (std::size_t i = 0; i < place.size(); ++i) place[i] = static_cast<int>(i);
    auto comms = extract_commodities(layered, place);
    Predicate p(layered, comms);
    p.need(0, comms.size() - 1);
    o.require(p.calls() <= static_cast<std::size_t>(2 * m + 1),
              "m=" + std::to_string(m) + ": " + std::to_string(p.calls()) + " calls");
    calls_at_max = std::max(calls_at_max, p.calls());
  }
  if (o.pass) {
    o.detail = "rules ~ " + fmt(all) + " per gate (halves " + fmt(low) + ", " + fmt(high) +
               "), calls <= 2m+1 up to m=32 (" + std::to_string(calls_at_max) + " at m=32)";
  }
  return o;
}

Outcome checker_totals() {
  Outcome o;
  o.require(audit.solutions > 0, "no solutions audited");
  o.require(audit.violations == 0, std::to_string(audit.violations) + " violations, first: " + audit.first);
  if (o.pass) o.detail = std::to_string(audit.solutions) + " solutions re-checked, 0 violations";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"worst-case placement of the four-qubit example", worst_case_placement},
      {"two processors, one layer", two_processor_layer},
      {"chain of conflicting remote gates", conflict_chain},
      {"solver matches the brute-force oracle", solver_optimality},
      {"binary search call bound", call_bound},
      {"rewrite rule soundness", rule_soundness},
      {"protocol equivalences", protocol_equivalences},
      {"entanglement path depth", path_depth},
      {"end-to-end equivalence", end_to_end},
      {"merge predicate complexity", predicate_growth},
      {"independent constraint checker", checker_totals},
  };
  int failed = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << c.name << ": " << o.detail << " ("
              << fmt(ms) << " ms)" << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " failed" : std::string("acceptance: all passed"))
            << std::endl;
  return failed ? 1 : 0;
}
