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
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/error.hpp"
#include "dqcc/network.hpp"
#include "dqcc/relations.hpp"

namespace dqcc {

struct Route {
  int tau = 0;                 // 1-based completion step
  std::vector<int> processors;  // from the control processor to the target processor
  std::vector<int> edges;       // quotient edge ids along `processors`
};

struct Solution {
  int d = 0;
  int total_flow = 0;
  std::vector<Route> routes;  // one per commodity, enumeration order
};

inline int e_depth(const Solution& s) {
  int d = 0;
  for (const auto& r : s.routes) d = std::max(d, r.tau);
  return d;
}

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t invocations = 0;
};

/// All simple paths from `from` to `to`, shortest first, ties broken by the
/// sequence of edge ids.
inline std::vector<Route> simple_paths(const QuotientGraph& q, int from, int to) {
  std::vector<Route> out;
  std::vector<char> seen(q.num_nodes(), 0);
  Route cur;
  cur.processors.push_back(from);
  seen[from] = 1;
  std::function<void(int)> dfs = [&](int u) {
    if (u == to) {
      out.push_back(cur);
      return;
    }
    for (auto [v, e] : q.adjacency[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      cur.processors.push_back(v);
      cur.edges.push_back(e);
      dfs(v);
      cur.processors.pop_back();
      cur.edges.pop_back();
      seen[v] = 0;
    }
  };
  dfs(from);
  std::stable_sort(out.begin(), out.end(), [](const Route& a, const Route& b) {
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    return a.edges < b.edges;
  });
  return out;
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const QuotientGraph& q, std::span<const Commodity> comms,
                 const RelationTable& rel, int d, SolveStats* stats)
      : q_(q), comms_(comms), rel_(rel), d_(d), stats_(stats) {
    for (const auto& c : comms_) {
      paths_.push_back(simple_paths(q_, c.control_proc, c.target_proc));
      if (paths_.back().empty()) {
        throw Error(ErrorKind::NoSolution, "no path for commodity " + std::to_string(c.index + 1));
      }
    }
    suffix_lb_.assign(comms_.size() + 1, 0);
    for (std::size_t i = comms_.size(); i-- > 0;) {
      suffix_lb_[i] = suffix_lb_[i + 1] + static_cast<int>(paths_[i].front().edges.size());
    }
    usage_.assign(static_cast<std::size_t>(d_) * q_.edges.size(), 0);
    tau_.assign(comms_.size(), 0);
    pick_.assign(comms_.size(), 0);
  }

  std::optional<Solution> run() {
    search(0, 0);
    if (best_ == kNoBest) return std::nullopt;
    Solution s;
    s.d = d_;
    s.total_flow = best_;
    for (std::size_t i = 0; i < comms_.size(); ++i) {
      Route r = paths_[i][best_pick_[i]];
      r.tau = best_tau_[i];
      s.routes.push_back(std::move(r));
    }
    return s;
  }

 private:
  static constexpr int kNoBest = std::numeric_limits<int>::max();

  void search(std::size_t i, int cost) {
    if (cost + suffix_lb_[i] >= best_) return;
    if (i == comms_.size()) {
      best_ = cost;
      best_tau_ = tau_;
      best_pick_ = pick_;
      return;
    }
    int lo = 1;
    int hi = d_;
    for (std::size_t j = 0; j < i; ++j) {
      if (rel_.strictly_before(j, i)) {
        lo = std::max(lo, tau_[j] + 1);
      } else if (rel_.not_after(j, i)) {
        lo = std::max(lo, tau_[j]);
      }
    }
    for (std::size_t p = 0; p < paths_[i].size(); ++p) {
      const auto& path = paths_[i][p];
      const int next = cost + static_cast<int>(path.edges.size());
      if (next + suffix_lb_[i + 1] >= best_) break;  // paths are sorted by length
      for (int tau = lo; tau <= hi; ++tau) {
        if (stats_) ++stats_->nodes;
        if (!fits(path, tau)) continue;
        occupy(path, tau, +1);
        tau_[i] = tau;
        pick_[i] = p;
        search(i + 1, next);
        occupy(path, tau, -1);
        if (best_ == suffix_lb_[0]) return;  // cannot do better than all shortest paths
      }
    }
  }

  bool fits(const Route& path, int tau) const {
    for (int e : path.edges) {
      if (usage_[slot(tau, e)] + 1 > q_.edges[e].capacity) return false;
    }
    return true;
  }
  void occupy(const Route& path, int tau, int delta) {
    for (int e : path.edges) usage_[slot(tau, e)] += delta;
  }
  std::size_t slot(int tau, int e) const {
    return static_cast<std::size_t>(tau - 1) * q_.edges.size() + static_cast<std::size_t>(e);
  }

  const QuotientGraph& q_;
  std::span<const Commodity> comms_;
  const RelationTable& rel_;
  int d_;
  SolveStats* stats_;
  std::vector<std::vector<Route>> paths_;
  std::vector<int> suffix_lb_;
  std::vector<int> usage_;
  std::vector<int> tau_;
  std::vector<std::size_t> pick_;
  int best_ = kNoBest;
  std::vector<int> best_tau_;
  std::vector<std::size_t> best_pick_;
};

}  // namespace detail

/// Minimum-total-flow schedule within horizon d, or nullopt when infeasible.
inline std::optional<Solution> solve_fixed_horizon(const QuotientGraph& q,
                                                   std::span<const Commodity> comms,
                                                   const RelationTable& rel, int d,
                                                   SolveStats* stats = nullptr) {
  if (d < 1) throw Error(ErrorKind::InvalidHorizon, "d = " + std::to_string(d));
  if (stats) ++stats->invocations;
  return detail::BranchAndBound(q, comms, rel, d, stats).run();
}

/// Binary search over the horizon (L = 1, R = k).
inline Solution quickest(const QuotientGraph& q, std::span<const Commodity> comms,
                         const RelationTable& rel, SolveStats* stats = nullptr) {
  if (comms.empty()) return {};
  int lo = 1;
  int hi = static_cast<int>(comms.size());
  std::optional<Solution> best;
  while (lo <= hi) {
    int mid = (lo + hi) / 2;
    auto s = solve_fixed_horizon(q, comms, rel, mid, stats);
    if (s) {
      best = std::move(s);
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  if (!best) throw Error(ErrorKind::NoSolution, "infeasible even with one commodity per step");
  return *best;
}

namespace oracle {

/// Simple paths by exhaustive extension over the adjacency matrix.
inline std::vector<std::vector<int>> all_paths(const QuotientGraph& q, int from, int to) {
  const int n = static_cast<int>(q.num_nodes());
  std::vector<std::vector<int>> edge(n, std::vector<int>(n, -1));
  for (std::size_t e = 0; e < q.edges.size(); ++e) {
    edge[q.edges[e].a][q.edges[e].b] = edge[q.edges[e].b][q.edges[e].a] = static_cast<int>(e);
  }
  std::vector<std::vector<int>> done;
  std::vector<std::vector<int>> open = {{from}};
  while (!open.empty()) {
    auto nodes = open.back();
    open.pop_back();
    if (nodes.back() == to) {
      std::vector<int> es;
      for (std::size_t k = 1; k < nodes.size(); ++k) es.push_back(edge[nodes[k - 1]][nodes[k]]);
      done.push_back(es);
      continue;
    }
    for (int v = 0; v < n; ++v) {
      if (edge[nodes.back()][v] < 0) continue;
      if (std::find(nodes.begin(), nodes.end(), v) != nodes.end()) continue;
      auto next = nodes;
      next.push_back(v);
      open.push_back(std::move(next));
    }
  }
  return done;
}

/// Exact optimum at horizon d by enumerating every step assignment and every
/// combination of simple paths. Returns the total flow.
inline std::optional<int> fixed_horizon(const QuotientGraph& q, std::span<const Commodity> comms,
                                        const RelationTable& rel, int d) {
  const std::size_t k = comms.size();
  std::vector<std::vector<std::vector<int>>> paths;
  for (const auto& c : comms) paths.push_back(all_paths(q, c.control_proc, c.target_proc));
  std::optional<int> best;
  std::vector<int> tau(k, 1);
  for (;;) {
    bool order_ok = true;
    for (std::size_t i = 0; i < k && order_ok; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (!rel.precedes(j, i)) continue;
        if (rel.quasi_parallel(j, i) ? tau[j] > tau[i] : tau[j] >= tau[i]) order_ok = false;
      }
    }
    if (order_ok) {
      std::vector<std::size_t> pick(k, 0);
      bool any = std::all_of(paths.begin(), paths.end(), [](const auto& p) { return !p.empty(); });
      while (any) {
        std::vector<int> load(static_cast<std::size_t>(d) * q.edges.size(), 0);
        int flow = 0;
        bool cap_ok = true;
        for (std::size_t i = 0; i < k; ++i) {
          for (int e : paths[i][pick[i]]) {
            ++flow;
            if (++load[static_cast<std::size_t>(tau[i] - 1) * q.edges.size() + e] >
                q.edges[e].capacity) {
              cap_ok = false;
            }
          }
        }
        if (cap_ok && (!best || flow < *best)) best = flow;
        std::size_t pos = 0;
        while (pos < k && ++pick[pos] == paths[pos].size()) pick[pos++] = 0;
        if (pos == k) break;
      }
    }
    std::size_t pos = 0;
    while (pos < k && ++tau[pos] > d) tau[pos++] = 1;
    if (pos == k) break;
  }
  return best;
}

}  // namespace oracle

struct OracleResult {
  int d = 0;
  int total_flow = 0;
};

/// Definitional optimum of (d, total_flow) for small instances; independent
/// of the branch and bound above. nullopt when no horizon up to k works.
/// The enumeration is exponential, so k and d are capped; the caps default to
/// 4 and may be raised deliberately for trivially small graphs.
inline std::optional<OracleResult> brute_force_oracle(const QuotientGraph& q,
                                                      std::span<const Commodity> comms,
                                                      const RelationTable& rel, int max_k = 4,
                                                      int max_d = 4) {
  const int k = static_cast<int>(comms.size());
  if (k > max_k) {
    throw Error(ErrorKind::InstanceTooLarge,
                "k = " + std::to_string(k) + " exceeds " + std::to_string(max_k));
  }
  if (k == 0) return OracleResult{};
  for (int d = 1; d <= std::min(k, max_d); ++d) {
    if (auto f = oracle::fixed_horizon(q, comms, rel, d)) return OracleResult{d, *f};
  }
  return std::nullopt;
}

/// f[arc][commodity][step]; arc 2e runs edge e from `a` to `b`, arc 2e+1 back.
using FlowVars = std::vector<std::vector<std::vector<char>>>;

/// Flow variables of a solution; each commodity's unit flows from its target
/// processor to its control processor.
inline FlowVars to_flow_vars(const QuotientGraph& q, const Solution& s) {
  FlowVars f(2 * q.edges.size(),
             std::vector<std::vector<char>>(s.routes.size(), std::vector<char>(s.d, 0)));
  for (std::size_t i = 0; i < s.routes.size(); ++i) {
    const auto& r = s.routes[i];
    for (std::size_t h = 0; h < r.edges.size(); ++h) {
      int from = r.processors[h + 1];  // walking backwards: target side first
      int e = r.edges[h];
      int arc = 2 * e + (q.edges[e].a == from ? 0 : 1);
      f[arc][i][r.tau - 1] = 1;
    }
  }
  return f;
}

/// Re-validates constraints (a)-(e) directly on flow variables. Returns the
/// list of violations (empty when feasible).
inline std::vector<std::string> check_solution(const QuotientGraph& q,
                                               std::span<const Commodity> comms,
                                               const RelationTable& rel, int d,
                                               const FlowVars& f) {
  std::vector<std::string> bad;
  const std::size_t k = comms.size();
  const std::size_t n = q.num_nodes();
  auto head = [&](std::size_t arc) { return arc % 2 == 0 ? q.edges[arc / 2].b : q.edges[arc / 2].a; };
  auto tail = [&](std::size_t arc) { return arc % 2 == 0 ? q.edges[arc / 2].a : q.edges[arc / 2].b; };
  auto name = [](std::size_t i) { return "commodity " + std::to_string(i + 1); };
  if (f.size() != 2 * q.edges.size()) {
    bad.push_back("arc count mismatch");
    return bad;
  }
  // x[i][t]: net inflow at the control processor
  std::vector<std::vector<int>> x(k, std::vector<int>(d, 0));
  for (std::size_t i = 0; i < k; ++i) {
    const int pc = comms[i].control_proc;
    const int pt = comms[i].target_proc;
    int total_c = 0;
    int total_t = 0;
    int steps_used = 0;
    for (int t = 0; t < d; ++t) {
      std::vector<int> net(n, 0);
      std::vector<int> in(n, 0);
      std::vector<int> out(n, 0);
      int arcs = 0;
      for (std::size_t a = 0; a < f.size(); ++a) {
        if (!f[a][i][t]) continue;
        ++arcs;
        ++net[head(a)];
        --net[tail(a)];
        ++in[head(a)];
        ++out[tail(a)];
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (static_cast<int>(v) == pc || static_cast<int>(v) == pt) continue;
        if (net[v] != 0) bad.push_back(name(i) + ": conservation broken at " + q.names[v]);
      }
      x[i][t] = net[pc];
      total_c += net[pc];
      total_t += net[pt];
      if (arcs) ++steps_used;
      // (e) the step's arcs form one simple path from pt to pc
      if (arcs) {
        bool simple = in[pt] == 0 && out[pc] == 0;
        for (std::size_t v = 0; v < n; ++v) simple = simple && in[v] <= 1 && out[v] <= 1;
        int walk = 0;
        int v = pt;
        std::vector<char> seen(n, 0);
        while (simple && v != pc) {
          seen[v] = 1;
          int next = -1;
          for (std::size_t a = 0; a < f.size(); ++a) {
            if (f[a][i][t] && tail(a) == v) next = head(a);
          }
          if (next < 0 || seen[next]) {
            simple = false;
            break;
          }
          v = next;
          ++walk;
        }
        if (!simple || walk != arcs) bad.push_back(name(i) + ": flow is not a simple path");
      }
    }
    if (total_c != 1) bad.push_back(name(i) + ": demand at control processor is not +1");
    if (total_t != -1) bad.push_back(name(i) + ": demand at target processor is not -1");
    if (steps_used != 1) bad.push_back(name(i) + ": flow spread over several steps");
  }
  for (std::size_t e = 0; e < q.edges.size(); ++e) {
    for (int t = 0; t < d; ++t) {
      int load = 0;
      for (std::size_t i = 0; i < k; ++i) load += f[2 * e][i][t] + f[2 * e + 1][i][t];
      if (load > q.edges[e].capacity) {
        bad.push_back("capacity exceeded on " + q.names[q.edges[e].a] + "-" + q.names[q.edges[e].b] +
                      " at step " + std::to_string(t + 1));
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!rel.precedes(j, i)) continue;
      const bool qp = rel.quasi_parallel(j, i);
      for (int t = 0; t < d; ++t) {
        int before = 0;
        for (int u = 0; u < (qp ? t + 1 : t); ++u) before += x[j][u];
        if (x[i][t] > before) {
          bad.push_back(name(i) + " completes before " + name(j));
        }
      }
    }
  }
  return bad;
}

inline std::string dump(const QuotientGraph& q, const Solution& s) {
  std::string out;
  for (std::size_t i = 0; i < s.routes.size(); ++i) {
    const auto& r = s.routes[i];
    out += std::to_string(i + 1) + " tau=" + std::to_string(r.tau) + " path=";
    for (std::size_t h = 0; h + 1 < r.processors.size(); ++h) {
      if (h) out += ",";
      out += q.names[r.processors[h]] + "-" + q.names[r.processors[h + 1]];
    }
    out += "\n";
  }
  out += "e_depth=" + std::to_string(e_depth(s)) + " total_flow=" + std::to_string(s.total_flow) + "\n";
  return out;
}

}  // namespace dqcc
