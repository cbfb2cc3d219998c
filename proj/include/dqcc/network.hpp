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
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/error.hpp"
#include "dqcc/text.hpp"

namespace dqcc {

struct Node {
  std::string name;
  int processor = -1;
  bool communication = false;
};

struct Processor {
  std::string name;
  std::vector<int> nodes;
};

/// The architecture: processors partition the qubits into computation and
/// communication qubits; `local` couples qubits of one processor and `links`
/// are entanglement links between communication qubits of distinct processors.
struct NetworkGraph {
  std::vector<Processor> processors;
  std::vector<Node> nodes;
  std::vector<std::pair<int, int>> local;
  std::vector<std::pair<int, int>> links;

  std::optional<int> node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].name == name) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  std::size_t count_computation() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return !n.communication; }));
  }
  std::size_t count_communication() const { return nodes.size() - count_computation(); }

  /// Processor index per circuit qubit, matched by name. Unmatched qubits map
  /// to -1 (extract_commodities rejects them).
  std::vector<int> placement_for(const LogicalCircuit& circuit) const {
    std::vector<int> out(circuit.num_qubits(), -1);
    for (std::size_t q = 0; q < circuit.num_qubits(); ++q) {
      auto node = node_index(circuit.qubits()[q]);
      if (node && !nodes[*node].communication) out[q] = nodes[*node].processor;
    }
    return out;
  }
};

namespace detail {

inline std::vector<std::string> tokenize_network(std::string_view text,
                                                 std::vector<int>& lines) {
  std::vector<std::string> out;
  detail::for_each_statement(text, [&](int line, const std::vector<std::string>& tok) {
    for (const auto& raw : tok) {
      std::string cur;
      for (char ch : raw) {
        if (ch == '{' || ch == '}') {
          if (!cur.empty()) out.push_back(cur), lines.push_back(line), cur.clear();
          out.emplace_back(1, ch);
          lines.push_back(line);
        } else {
          cur += ch;
        }
      }
      if (!cur.empty()) out.push_back(cur), lines.push_back(line);
    }
  });
  return out;
}

inline void validate_network(const NetworkGraph& net) {
  for (auto [a, b] : net.local) {
    if (net.nodes[a].processor != net.nodes[b].processor) {
      throw Error(ErrorKind::Syntax, "local coupling " + net.nodes[a].name + "-" +
                                         net.nodes[b].name + " crosses processors");
    }
  }
  for (auto [a, b] : net.links) {
    for (int x : {a, b}) {
      if (!net.nodes[x].communication) {
        throw Error(ErrorKind::LinkOnComputationQubit, "'" + net.nodes[x].name + "'");
      }
    }
    if (net.nodes[a].processor == net.nodes[b].processor) {
      throw Error(ErrorKind::LinkInsideProcessor,
                  net.nodes[a].name + "-" + net.nodes[b].name);
    }
  }
  if (net.nodes.empty()) return;
  // connectivity over L ∪ R
  std::vector<int> parent(net.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : net.local) parent[find(a)] = find(b);
  for (auto [a, b] : net.links) parent[find(a)] = find(b);
  for (std::size_t i = 1; i < net.nodes.size(); ++i) {
    if (find(static_cast<int>(i)) != find(0)) {
      throw Error(ErrorKind::Disconnected,
                  "'" + net.nodes[i].name + "' unreachable from '" + net.nodes[0].name + "'");
    }
  }
}

}  // namespace detail

/// Parses
///
///     processor P1 { comp q1 q2  comm c1 c2 }
///     local q1 c1
///     elink c1 c3
///
/// and validates the architecture invariants.
inline NetworkGraph parse_network(std::string_view text) {
  std::vector<int> lines;
  auto tok = detail::tokenize_network(text, lines);
  NetworkGraph net;
  std::unordered_map<std::string, int> names;
  std::unordered_map<std::string, int> procs;
  std::size_t i = 0;
  auto line_at = [&](std::size_t k) { return k < lines.size() ? lines[k] : (lines.empty() ? 0 : lines.back()); };
  auto expect = [&](std::size_t k) -> const std::string& {
    if (k >= tok.size()) throw Error(ErrorKind::Syntax, "unexpected end of input", line_at(k));
    return tok[k];
  };
  auto node = [&](std::size_t k) {
    const auto& name = expect(k);
    auto it = names.find(name);
    if (it == names.end()) throw Error(ErrorKind::UnknownNode, "'" + name + "'", line_at(k));
    return it->second;
  };
  while (i < tok.size()) {
    const auto& kw = tok[i];
    if (kw == "processor") {
      const auto& pname = expect(i + 1);
      if (procs.contains(pname)) throw Error(ErrorKind::DuplicateNode, "processor '" + pname + "'", line_at(i));
      if (expect(i + 2) != "{") throw Error(ErrorKind::Syntax, "expected '{'", line_at(i + 2));
      int p = static_cast<int>(net.processors.size());
      procs[pname] = p;
      net.processors.push_back({pname, {}});
      i += 3;
      bool comm = false;
      bool mode_set = false;
      while (expect(i) != "}") {
        const auto& t = tok[i];
        if (t == "comp" || t == "comm") {
          comm = (t == "comm");
          mode_set = true;
        } else {
          if (!mode_set) throw Error(ErrorKind::Syntax, "expected 'comp' or 'comm'", line_at(i));
          if (names.contains(t) || procs.contains(t)) {
            throw Error(ErrorKind::DuplicateNode, "'" + t + "'", line_at(i));
          }
          names[t] = static_cast<int>(net.nodes.size());
          net.processors[p].nodes.push_back(static_cast<int>(net.nodes.size()));
          net.nodes.push_back({t, p, comm});
        }
        ++i;
      }
      ++i;
    } else if (kw == "local" || kw == "elink") {
      int a = node(i + 1);
      int b = node(i + 2);
      if (a == b) throw Error(ErrorKind::Syntax, "self coupling '" + tok[i + 1] + "'", line_at(i));
      (kw == "local" ? net.local : net.links).emplace_back(a, b);
      i += 3;
    } else {
      throw Error(ErrorKind::Syntax, "unexpected '" + kw + "'", line_at(i));
    }
  }
  detail::validate_network(net);
  return net;
}

struct QuotientEdge {
  int a = -1;  // a < b
  int b = -1;
  int capacity = 0;
  std::vector<int> links;  // indices into NetworkGraph::links, ascending

  int other(int p) const { return p == a ? b : a; }
};

/// Processors as nodes; all links between a processor pair collapse into one
/// undirected edge whose capacity is the number of links.
struct QuotientGraph {
  std::vector<std::string> names;
  std::vector<QuotientEdge> edges;
  std::vector<std::vector<std::pair<int, int>>> adjacency;  // (neighbour, edge)

  std::size_t num_nodes() const { return names.size(); }

  std::optional<int> edge_between(int a, int b) const {
    for (auto [nbr, e] : adjacency[a]) {
      if (nbr == b) return e;
    }
    return std::nullopt;
  }

  int total_capacity() const {
    int s = 0;
    for (const auto& e : edges) s += e.capacity;
    return s;
  }

  /// Hop distance from `src` to every node (max int when unreachable).
  std::vector<int> distances_from(int src) const {
    std::vector<int> dist(num_nodes(), std::numeric_limits<int>::max());
    std::queue<int> bfs;
    dist[src] = 0;
    bfs.push(src);
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (auto [v, e] : adjacency[u]) {
        if (dist[v] == std::numeric_limits<int>::max()) {
          dist[v] = dist[u] + 1;
          bfs.push(v);
        }
      }
    }
    return dist;
  }

  /// Builds a quotient graph directly from processor-pair capacities.
  static QuotientGraph from_capacities(std::vector<std::string> names,
                                       const std::vector<std::tuple<int, int, int>>& caps) {
    QuotientGraph q;
    q.names = std::move(names);
    q.adjacency.resize(q.names.size());
    for (auto [a, b, c] : caps) {
      if (a > b) std::swap(a, b);
      int e = static_cast<int>(q.edges.size());
      q.edges.push_back({a, b, c, {}});
      q.adjacency[a].emplace_back(b, e);
      q.adjacency[b].emplace_back(a, e);
    }
    return q;
  }
};

inline QuotientGraph quotient(const NetworkGraph& net) {
  std::map<std::pair<int, int>, std::vector<int>> classes;
  for (std::size_t l = 0; l < net.links.size(); ++l) {
    int pa = net.nodes[net.links[l].first].processor;
    int pb = net.nodes[net.links[l].second].processor;
    classes[{std::min(pa, pb), std::max(pa, pb)}].push_back(static_cast<int>(l));
  }
  QuotientGraph q;
  for (const auto& p : net.processors) q.names.push_back(p.name);
  q.adjacency.resize(q.names.size());
  for (auto& [key, members] : classes) {
    int e = static_cast<int>(q.edges.size());
    q.edges.push_back({key.first, key.second, static_cast<int>(members.size()), members});
    q.adjacency[key.first].emplace_back(key.second, e);
    q.adjacency[key.second].emplace_back(key.first, e);
  }
  return q;
}

/// d copies of the quotient graph plus per-commodity connector arcs. Commodity
/// i (0-based) connects only to copies 1..min(i+1, d).
struct TimeExpandedGraph {
  struct CopyEdge {
    int step = 0;  // 1-based copy
    int edge = 0;
    int capacity = 0;
  };
  struct Connector {
    std::size_t commodity = 0;
    int step = 0;
    bool from_source = true;  // source -> copy (true) or copy -> sink (false)
    int processor = -1;
    int capacity = 1;
  };

  int horizon = 0;
  std::size_t processors = 0;
  std::vector<CopyEdge> copy_edges;
  std::vector<Connector> connectors;

  std::size_t connector_count(std::size_t commodity) const {
    return static_cast<std::size_t>(std::count_if(
        connectors.begin(), connectors.end(),
        [&](const Connector& c) { return c.commodity == commodity; }));
  }
  std::vector<int> reachable_steps(std::size_t commodity) const {
    std::vector<int> out;
    for (const auto& c : connectors) {
      if (c.commodity == commodity && c.from_source) out.push_back(c.step);
    }
    return out;
  }
};

inline TimeExpandedGraph time_expand(const QuotientGraph& q, std::span<const Commodity> commodities,
                                     int horizon) {
  if (horizon < 1) throw Error(ErrorKind::InvalidHorizon, "d = " + std::to_string(horizon));
  TimeExpandedGraph g;
  g.horizon = horizon;
  g.processors = q.num_nodes();
  for (int step = 1; step <= horizon; ++step) {
    for (std::size_t e = 0; e < q.edges.size(); ++e) {
      g.copy_edges.push_back({step, static_cast<int>(e), q.edges[e].capacity});
    }
  }
  for (const auto& c : commodities) {
    int last = std::min(static_cast<int>(c.index) + 1, horizon);
    for (int step = 1; step <= last; ++step) {
      g.connectors.push_back({c.index, step, true, c.control_proc, 1});
      g.connectors.push_back({c.index, step, false, c.target_proc, 1});
    }
  }
  return g;
}

}  // namespace dqcc
