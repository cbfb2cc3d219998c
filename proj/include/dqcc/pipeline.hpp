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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/expand.hpp"
#include "dqcc/flow.hpp"
#include "dqcc/network.hpp"
#include "dqcc/predicate.hpp"
#include "dqcc/relations.hpp"
#include "dqcc/simulate.hpp"

namespace dqcc {

struct CompileOptions {
  int coherence = 0;
  bool enable_qp = true;
  bool emit_physical = true;
  bool verify = false;
  std::uint64_t seed = 20260101;
  double tol = 1e-9;
};

struct CompileResult {
  LogicalCircuit layered;
  std::vector<Commodity> commodities;
  QuotientGraph quotient;
  RelationTable relations;
  Solution solution;
  SolveStats solver;
  std::vector<std::string> violations;
  std::optional<PhysicalSchedule> physical;
  std::optional<EquivalenceReport> verification;
  double wall_ms = 0;
};

inline CompileResult compile(const LogicalCircuit& circuit, const NetworkGraph& net,
                             const CompileOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  CompileResult r;
  r.layered = layerize(circuit);
  auto placement = net.placement_for(r.layered);
  r.commodities = extract_commodities(r.layered, placement);
  r.quotient = quotient(net);
  Predicate predicate(r.layered, r.commodities);
  r.relations = build_relations(r.commodities, predicate, opt.coherence, opt.enable_qp);
  r.solution = quickest(r.quotient, r.commodities, r.relations, &r.solver);
  if (!r.commodities.empty()) {
    r.violations = check_solution(r.quotient, r.commodities, r.relations, r.solution.d,
                                  to_flow_vars(r.quotient, r.solution));
  }
  if (opt.emit_physical || opt.verify) {
    r.physical = emit_schedule(r.solution, r.layered, predicate, net, r.quotient);
  }
  if (opt.verify) {
    SimOptions so;
    so.seed = opt.seed;
    r.verification = equivalent(r.physical->circuit, r.layered, opt.tol, so);
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace dqcc
