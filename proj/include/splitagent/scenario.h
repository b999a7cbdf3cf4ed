// Copyright 2026 The SplitAgent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPLITAGENT_SCENARIO_H_
#define SPLITAGENT_SCENARIO_H_

// Scenario scripts and session reports. Both are line-oriented text:
//
//   # splitagent-script-1
//   # name support-50
//   # task customer_support
//   <importance> TAB <tools|-> TAB <document id|-> TAB <instruction>
//
// tools is a comma list; '-' means none. A document id pins the turn to
// that document, '-' retrieves by the instruction text.
//
//   # splitagent-report-1
//   # session <id>
//   # task <task>
//   # strategy <strategy>
//   # epsilon_total <e>
//   turn TAB document TAB epsilon_allocated TAB epsilon_charged TAB utility
//        TAB completed TAB tool_calls TAB budget_state
//   # cumulative_utility <u>
//   # completion_rate <r>
//   # epsilon_spent <s>

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/budget.h"
#include "splitagent/core_model.h"

namespace splitagent {

struct ScenarioTurn {
  std::string instruction;
  double importance = 0.5;
  std::vector<std::string> expected_tools;
  std::string document_id;  // empty: retrieve

  friend bool operator==(const ScenarioTurn&, const ScenarioTurn&) = default;
};

struct ScenarioScript {
  std::string name;
  TaskType task = TaskType::kContractReview;
  std::vector<ScenarioTurn> turns;

  friend bool operator==(const ScenarioScript&, const ScenarioScript&) = default;
};

std::string FormatScript(const ScenarioScript& script);
// SpecInvalid for a missing task, zero turns, importance outside [0, 1],
// or a malformed line.
absl::StatusOr<ScenarioScript> ParseScript(absl::string_view text);

struct TurnReport {
  int turn = 0;
  std::string document_id;  // '+'-joined when several; empty if none
  double epsilon_allocated = 0.0;
  double epsilon_charged = 0.0;
  double utility = 0.0;
  bool completed = false;
  int tool_calls = 0;
  BudgetState budget_state = BudgetState::kActive;

  friend bool operator==(const TurnReport&, const TurnReport&) = default;
};

struct SessionReport {
  std::string session_id;
  TaskType task = TaskType::kContractReview;
  AllocationStrategy strategy = AllocationStrategy::kLinear;
  double epsilon_total = 0.0;
  std::vector<TurnReport> turns;  // one per script turn

  // Sum of utility over completed turns.
  double CumulativeUtility() const;
  double CompletionRate() const;
  double EpsilonSpent() const;

  friend bool operator==(const SessionReport&, const SessionReport&) = default;
};

std::string FormatReport(const SessionReport& report);
absl::StatusOr<SessionReport> ParseReport(absl::string_view text);

}  // namespace splitagent

#endif  // SPLITAGENT_SCENARIO_H_
