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

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqcc {

enum class ErrorKind {
  Syntax,
  UnknownGate,
  UndeclaredQubit,
  EqualOperands,
  DuplicateNode,
  UnknownNode,
  LinkOnComputationQubit,
  LinkInsideProcessor,
  Disconnected,
  UnplacedQubit,
  InvalidHorizon,
  InstanceTooLarge,
  NoSolution,
  QubitBudgetExceeded,
  ConsumedQubit,
  BindingFailure,
  MissingLifetimeEndpoint,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::UnknownGate: return "UnknownGate";
    case ErrorKind::UndeclaredQubit: return "UndeclaredQubit";
    case ErrorKind::EqualOperands: return "EqualOperands";
    case ErrorKind::DuplicateNode: return "DuplicateNode";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::LinkOnComputationQubit: return "LinkOnComputationQubit";
    case ErrorKind::LinkInsideProcessor: return "LinkInsideProcessor";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::UnplacedQubit: return "UnplacedQubit";
    case ErrorKind::InvalidHorizon: return "InvalidHorizon";
    case ErrorKind::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::QubitBudgetExceeded: return "QubitBudgetExceeded";
    case ErrorKind::ConsumedQubit: return "ConsumedQubit";
    case ErrorKind::BindingFailure: return "BindingFailure";
    case ErrorKind::MissingLifetimeEndpoint: return "MissingLifetimeEndpoint";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
/// `line` is the 1-based source line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, int line = 0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }
  int line() const noexcept { return line_; }

 private:
  ErrorKind kind_;
  int line_;
};

}  // namespace dqcc
