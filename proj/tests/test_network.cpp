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

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace dqcc;
using namespace dqcc::testing;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_network(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::Syntax;
}

}  // namespace

TEST_CASE("toy network parses") {
  auto net = parse_network(kToyNetwork);
  CHECK(net.processors.size() == 3);
  CHECK(net.count_computation() == 6);
  CHECK(net.count_communication() == 6);
  CHECK(net.local.size() == 10);
  CHECK(net.links.size() == 3);
}

TEST_CASE("quotient collapses parallel links") {
  auto q = quotient(parse_network(kToyNetwork));
  REQUIRE(q.num_nodes() == 3);
  REQUIRE(q.edges.size() == 2);
  auto e12 = q.edge_between(0, 1);
  auto e23 = q.edge_between(1, 2);
  REQUIRE(e12);
  REQUIRE(e23);
  CHECK(q.edges[*e12].capacity == 2);
  CHECK(q.edges[*e23].capacity == 1);
  CHECK_FALSE(q.edge_between(0, 2));
  CHECK(q.total_capacity() == 3);
  CHECK(q.distances_from(0) == std::vector<int>{0, 1, 2});
}

TEST_CASE("network validation") {
  CHECK(kind_of("processor A { comp q1 comm c1 }\nprocessor B { comp q2 comm c2 }\n"
                "local q1 c1\nlocal q2 c2\nelink q1 c2\n") == ErrorKind::LinkOnComputationQubit);
  CHECK(kind_of("processor A { comp q1 comm c1 c2 }\nlocal q1 c1\nlocal q1 c2\nelink c1 c2\n") ==
        ErrorKind::LinkInsideProcessor);
  CHECK(kind_of("processor A { comp q1 comm c1 }\nprocessor B { comp q2 comm c2 }\n"
                "local q1 c1\nlocal q2 c2\n") == ErrorKind::Disconnected);
  CHECK(kind_of("processor A { comp q1 q1 }\n") == ErrorKind::DuplicateNode);
  CHECK(kind_of("processor A { comp q1 }\nlocal q1 q9\n") == ErrorKind::UnknownNode);
  CHECK(kind_of("processor A { comp q1 \n") == ErrorKind::Syntax);
}

TEST_CASE("placement follows computation qubit names") {
  auto net = parse_network(kToyNetwork);
  auto c = parse_circuit("qubits q4 q1 q3\ncx q1 q4\n");
  CHECK(net.placement_for(c) == std::vector<int>{2, 0, 1});
  auto missing = parse_circuit("qubits q1 q9\n");
  CHECK(net.placement_for(missing)[1] == -1);
}

TEST_CASE("time expansion connectors") {
  auto q = QuotientGraph::from_capacities({"A", "B", "C", "D"}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
  std::vector<Commodity> comms{commodity(0, 0, 1, 0), commodity(1, 1, 2, 0), commodity(2, 2, 3, 1)};
  auto g = time_expand(q, comms, 2);
  CHECK(g.copy_edges.size() == 6);
  for (std::size_t i = 0; i < comms.size(); ++i) {
    CHECK(g.connector_count(i) == 2 * std::min<std::size_t>(i + 1, 2));
  }
  CHECK(g.reachable_steps(0) == std::vector<int>{1});
  CHECK(g.reachable_steps(2) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(time_expand(q, comms, 0), Error);
}

TEST_CASE("generated networks are well formed") {
  auto net = parse_network(spread_network(3, {{0, 1, 2}, {1, 2, 1}}));
  auto q = quotient(net);
  CHECK(q.edges.size() == 2);
  CHECK(q.edges[*q.edge_between(0, 1)].capacity == 2);
  auto two = quotient(parse_network(two_processor_network(3, 4)));
  CHECK(two.edges.size() == 1);
  CHECK(two.edges[0].capacity == 4);
}
