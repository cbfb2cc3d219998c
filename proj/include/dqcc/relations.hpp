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

#include <cstddef>
#include <string>
#include <vector>

#include "dqcc/circuit.hpp"
#include "dqcc/predicate.hpp"

namespace dqcc {

/// Pairwise relations over commodities, indexed by enumeration order. Only
/// pairs (i, j) with i < j are stored.
class RelationTable {
 public:
  RelationTable() = default;
  explicit RelationTable(std::size_t k) : k_(k), prec_(k * k, 0), qp_(k * k, 0) {}

  std::size_t size() const { return k_; }

  /// i before j in layer order (i < j required)
  bool precedes(std::size_t i, std::size_t j) const { return prec_[i * k_ + j] != 0; }
  bool quasi_parallel(std::size_t i, std::size_t j) const { return qp_[i * k_ + j] != 0; }

  void set(std::size_t i, std::size_t j, bool prec, bool qp) {
    prec_[i * k_ + j] = prec;
    qp_[i * k_ + j] = qp;
  }

  /// Must j's completion step be strictly earlier than i's? (j < i)
  bool strictly_before(std::size_t j, std::size_t i) const {
    return precedes(j, i) && !quasi_parallel(j, i);
  }
  /// May j share i's step but not come later? (j < i)
  bool not_after(std::size_t j, std::size_t i) const { return precedes(j, i); }

  std::string dump() const {
    std::string out;
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = i + 1; j < k_; ++j) {
        out += std::to_string(i + 1) + " " + std::to_string(j + 1) +
               " prec=" + (precedes(i, j) ? "1" : "0") + " qp=" + (quasi_parallel(i, j) ? "1" : "0") +
               "\n";
      }
    }
    return out;
  }

 private:
  std::size_t k_ = 0;
  std::vector<char> prec_;
  std::vector<char> qp_;
};

inline RelationTable build_relations(std::span<const Commodity> commodities, Predicate& predicate,
                                     int budget, bool enable_qp) {
  RelationTable t(commodities.size());
  for (std::size_t i = 0; i < commodities.size(); ++i) {
    for (std::size_t j = i + 1; j < commodities.size(); ++j) {
      const bool prec = commodities[i].layer < commodities[j].layer;
      bool qp = !prec;
      if (prec && enable_qp) qp = predicate.holds(i, j, budget);
      t.set(i, j, prec, qp);
    }
  }
  return t;
}

/// Convenience overload that owns its predicate.
inline RelationTable build_relations(std::span<const Commodity> commodities,
                                     const LogicalCircuit& layered, int budget, bool enable_qp) {
  Predicate p(layered, {commodities.begin(), commodities.end()});
  return build_relations(commodities, p, budget, enable_qp);
}

}  // namespace dqcc
