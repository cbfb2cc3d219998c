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
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dqcc/pipeline.hpp"

namespace dqcc::testing {

inline const char* kToyNetwork = R"(processor P1 { comp q1 q2  comm c1 c2 }
processor P2 { comp q3  comm c3 c4 c5 }
processor P3 { comp q4 q5 q6  comm c6 }
local q1 q2
local q1 c1
local q2 c2
local c5 q3
local c4 q3
local c3 c5
local c3 c4
local c6 q4
local c6 q6
local q6 q5
elink c1 c3
elink c2 c4
elink c5 c6
)";

/// One computation qubit per processor (`q1` on P1, ...) and `cap` links on
/// each listed processor pair (0-based). Communication qubits are private per
/// link so binding never collides.
inline std::string spread_network(int processors,
                                  const std::vector<std::tuple<int, int, int>>& pairs) {
  std::vector<std::vector<std::string>> comm(processors);
  std::vector<std::string> links;
  int serial = 0;
  for (auto [a, b, cap] : pairs) {
    for (int l = 0; l < cap; ++l) {
      std::string ca = "c" + std::to_string(serial++);
      std::string cb = "c" + std::to_string(serial++);
      comm[a].push_back(ca);
      comm[b].push_back(cb);
      links.push_back("elink " + ca + " " + cb + "\n");
    }
  }
  std::string out;
  for (int p = 0; p < processors; ++p) {
    std::string q = "q" + std::to_string(p + 1);
    out += "processor P" + std::to_string(p + 1) + " { comp " + q;
    if (!comm[p].empty()) {
      out += " comm";
      for (const auto& c : comm[p]) out += " " + c;
    }
    out += " }\n";
    for (const auto& c : comm[p]) out += "local " + q + " " + c + "\n";
  }
  for (const auto& l : links) out += l;
  return out;
}

/// Two processors, `per_side` computation qubits on each (a1.. and b1..),
/// `cap` links between them.
inline std::string two_processor_network(int per_side, int cap) {
  std::string out;
  for (char side : {'a', 'b'}) {
    out += std::string("processor ") + char(side - 32) + " { comp";
    for (int i = 1; i <= per_side; ++i) out += std::string(" ") + side + std::to_string(i);
    out += " comm";
    for (int l = 0; l < cap; ++l) out += std::string(" ") + side + "c" + std::to_string(l);
    out += " }\n";
    for (int l = 0; l < cap; ++l) {
      out += std::string("local ") + side + "1 " + side + "c" + std::to_string(l) + "\n";
    }
    for (int i = 2; i <= per_side; ++i) {
      out += std::string("local ") + side + "1 " + side + std::to_string(i) + "\n";
    }
  }
  for (int l = 0; l < cap; ++l) {
    out += "elink ac" + std::to_string(l) + " bc" + std::to_string(l) + "\n";
  }
  return out;
}

/// Seeded random state over n qubits.
inline std::vector<cplx> random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(std::size_t{1} << n);
  double norm = 0;
  for (auto& a : v) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(norm);
  return v;
}

/// Largest deviation between branches of `lhs` and `rhs` that carry the same
/// bit values, after `remap` rewrites the rhs bits into lhs meaning. Both
/// circuits must declare the same wires in the same order. Returns 1 when
/// the branch sets do not line up.
inline double branchwise_dev(const ExtendedCircuit& lhs, const ExtendedCircuit& rhs,
                             const std::function<void(std::vector<int>&)>& remap = {},
                             int inputs = 4) {
  double worst = 0;
  const int n = static_cast<int>(lhs.computation_wires().size());
  for (int k = 0; k < inputs; ++k) {
    auto in = random_state(n, 97 + static_cast<std::uint64_t>(k));
    auto a = run(lhs, in);
    auto b = run(rhs, in);
    if (a.live_comm != b.live_comm) return 1.0;
    std::map<std::vector<int>, const StateBranch*> by_bits;
    double total = 0;
    for (const auto& br : a.branches) {
      by_bits[br.bits] = &br;
      total += br.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) return 1.0;
    for (const auto& br : b.branches) {
      auto bits = br.bits;
      if (remap) remap(bits);
      auto it = by_bits.find(bits);
      if (it == by_bits.end() || std::abs(it->second->probability - br.probability) > 1e-9) return 1.0;
      worst = std::max(worst, detail::overlap_dev(it->second->amplitudes, br.amplitudes));
    }
    if (a.branches.size() != b.branches.size()) return 1.0;
  }
  return worst;
}

/// Random H/T/CX circuit over the named qubits, as text. CX makes up about
/// `cx_share` percent of the gates.
inline std::string random_circuit(const std::vector<std::string>& qubits, int gates, std::mt19937_64& rng,
                                  int cx_share = 50) {
  std::string out = "qubits";
  for (const auto& q : qubits) out += " " + q;
  out += "\n";
  const auto n = qubits.size();
  for (int g = 0; g < gates; ++g) {
    auto a = rng() % n;
    if (static_cast<int>(rng() % 100) < cx_share) {
      auto b = (a + 1 + rng() % (n - 1)) % n;
      out += "cx " + qubits[a] + " " + qubits[b] + "\n";
    } else {
      out += std::string(rng() % 2 ? "h " : "t ") + qubits[a] + "\n";
    }
  }
  return out;
}

/// Commodities of `circuit` after layering.
inline std::vector<Commodity> commodities_of(const LogicalCircuit& layered, const NetworkGraph& net) {
  return extract_commodities(layered, net.placement_for(layered));
}

/// Hand-built commodity (0-based processors) for solver-only tests.
inline Commodity commodity(std::size_t index, int control_proc, int target_proc, std::size_t layer) {
  Commodity c;
  c.index = index;
  c.control_proc = control_proc;
  c.target_proc = target_proc;
  c.layer = layer;
  return c;
}

}  // namespace dqcc::testing
