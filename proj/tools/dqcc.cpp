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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dqcc/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kParse = 2, kInfeasible = 3, kVerify = 4 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dqcc::Error(dqcc::ErrorKind::Syntax, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw dqcc::Error(dqcc::ErrorKind::Syntax, "cannot write '" + path + "'");
  out << text;
}

int exit_code(dqcc::ErrorKind k) {
  using dqcc::ErrorKind;
  switch (k) {
    case ErrorKind::NoSolution:
    case ErrorKind::BindingFailure:
    case ErrorKind::InstanceTooLarge:
    case ErrorKind::InvalidHorizon:
      return kInfeasible;
    case ErrorKind::QubitBudgetExceeded:
    case ErrorKind::ConsumedQubit:
    case ErrorKind::MissingLifetimeEndpoint:
      return kVerify;
    default:
      return kParse;
  }
}

std::string fmt_dev(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Common {
  std::string circuit;
  std::string network;
  int coherence = 0;
  bool no_qp = false;
  std::uint64_t seed = 20260101;
};

int run_compile(const Common& c, bool emit_physical, bool verify, const std::string& out_path,
                const std::string& relations_path) {
  auto circuit = dqcc::parse_circuit(slurp(c.circuit));
  auto net = dqcc::parse_network(slurp(c.network));
  dqcc::CompileOptions opt;
  opt.coherence = c.coherence;
  opt.enable_qp = !c.no_qp;
  opt.emit_physical = emit_physical || !out_path.empty();
  opt.verify = verify;
  opt.seed = c.seed;
  auto r = dqcc::compile(circuit, net, opt);

  if (!relations_path.empty()) write_file(relations_path, r.relations.dump());
  std::cout << "k=" << r.commodities.size() << "\n"
            << "layers=" << r.layered.depth() << "\n"
            << "quasi_parallel=" << (opt.enable_qp ? 1 : 0) << "\n"
            << "coherence=" << opt.coherence << "\n"
            << "d=" << r.solution.d << "\n"
            << "total_flow=" << r.solution.total_flow << "\n"
            << "solver_nodes=" << r.solver.nodes << "\n"
            << "solver_calls=" << r.solver.invocations << "\n"
            << "checker_violations=" << r.violations.size() << "\n";
  if (r.physical) {
    std::cout << "e_gates=" << r.physical->stats.e_gates << "\n"
              << "merges=" << r.physical->stats.merges_applied << "\n";
  }
  if (r.verification) {
    std::cout << "verify=" << (r.verification->equivalent ? "PASS" : "FAIL") << "\n"
              << "max_dev=" << fmt_dev(r.verification->max_dev) << "\n";
    if (r.verification->sampled_inputs) std::cout << "verify_mode=sampled seed=" << c.seed << "\n";
  }
  std::cout << dqcc::dump(r.quotient, r.solution);
  std::cerr << "wall_ms=" << r.wall_ms << "\n";
  if (r.physical && opt.emit_physical) {
    auto text = dqcc::to_text(r.physical->circuit);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_file(out_path, text);
    }
  }
  for (const auto& v : r.violations) std::cerr << "violation: " << v << "\n";
  if (!r.violations.empty()) return kInfeasible;
  if (r.verification && !r.verification->equivalent) return kVerify;
  return kOk;
}

int run_verify(const std::string& circuit_path, const std::string& physical_path,
               std::uint64_t seed) {
  auto logical = dqcc::parse_circuit(slurp(circuit_path));
  auto physical = dqcc::parse_physical(slurp(physical_path));
  dqcc::SimOptions so;
  so.seed = seed;
  auto rep = dqcc::equivalent(physical, logical, 1e-9, so);
  std::cout << "check equivalence: " << (rep.equivalent ? "PASS" : "FAIL")
            << " (max-dev=" << fmt_dev(rep.max_dev) << ")\n";
  return rep.equivalent ? kOk : kVerify;
}

int run_oracle(const Common& c) {
  auto circuit = dqcc::layerize(dqcc::parse_circuit(slurp(c.circuit)));
  auto net = dqcc::parse_network(slurp(c.network));
  auto comms = dqcc::extract_commodities(circuit, net.placement_for(circuit));
  auto q = dqcc::quotient(net);
  auto rel = dqcc::build_relations(comms, circuit, c.coherence, !c.no_qp);
  auto o = dqcc::brute_force_oracle(q, comms, rel);
  if (!o) {
    std::cout << "oracle=infeasible\n";
    return kInfeasible;
  }
  auto s = dqcc::quickest(q, comms, rel);
  std::cout << "oracle_d=" << o->d << "\n"
            << "oracle_total_flow=" << o->total_flow << "\n"
            << "solver_d=" << s.d << "\n"
            << "solver_total_flow=" << s.total_flow << "\n";
  bool same = o->d == s.d && o->total_flow == s.total_flow;
  std::cout << "check oracle: " << (same ? "PASS" : "FAIL") << "\n";
  return same ? kOk : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dqcc: telegate scheduling for distributed quantum circuits"};
  app.require_subcommand(1);

  Common common;
  bool emit_physical = false;
  bool verify = false;
  std::string out_path;
  std::string relations_path;
  auto* compile = app.add_subcommand("compile", "schedule, expand and optionally verify");
  compile->add_option("--circuit", common.circuit, "logical circuit file")->required();
  compile->add_option("--network", common.network, "network file")->required();
  compile->add_option("--coherence", common.coherence, "coherence budget in layers")
      ->check(CLI::NonNegativeNumber);
  compile->add_flag("--no-quasi-parallel", common.no_qp, "treat every conflicting pair as sequential");
  compile->add_flag("--emit-physical", emit_physical, "print the physical circuit");
  compile->add_flag("--verify", verify, "check the physical circuit by simulation");
  compile->add_option("--out", out_path, "write the physical circuit here");
  compile->add_option("--dump-relations", relations_path, "write the relation table here");
  compile->add_option("--seed", common.seed, "seed for sampled verification");

  std::string physical_path;
  auto* verify_cmd = app.add_subcommand("verify", "check a physical circuit against its logical circuit");
  verify_cmd->add_option("--circuit", common.circuit, "logical circuit file")->required();
  verify_cmd->add_option("--physical", physical_path, "physical circuit file")->required();
  verify_cmd->add_option("--seed", common.seed, "seed for sampled verification");

  auto* oracle = app.add_subcommand("oracle", "cross-check the solver against brute force");
  oracle->add_option("--circuit", common.circuit, "logical circuit file")->required();
  oracle->add_option("--network", common.network, "network file")->required();
  oracle->add_option("--coherence", common.coherence, "coherence budget in layers")
      ->check(CLI::NonNegativeNumber);
  oracle->add_flag("--no-quasi-parallel", common.no_qp, "treat every conflicting pair as sequential");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  try {
    if (*compile) return run_compile(common, emit_physical, verify, out_path, relations_path);
    if (*verify_cmd) return run_verify(common.circuit, physical_path, common.seed);
    return run_oracle(common);
  } catch (const dqcc::Error& e) {
    std::cerr << "error: " << e.what();
    if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
    std::cerr << "\n";
    return exit_code(e.kind());
  }
}
