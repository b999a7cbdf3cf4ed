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

#include "splitagent/scenario.h"

#include <cmath>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

absl::Status Bad(int line_no, absl::string_view what) {
  return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("line ", line_no, ": ", what));
}

// "# key value" -> (key, value); false for other lines.
bool MetaLine(absl::string_view line, std::string& key, std::string& value) {
  if (!absl::ConsumePrefix(&line, "#")) return false;
  line = absl::StripLeadingAsciiWhitespace(line);
  const std::size_t space = line.find(' ');
  key = std::string(line.substr(0, space));
  value = space == absl::string_view::npos
              ? ""
              : std::string(absl::StripAsciiWhitespace(line.substr(space + 1)));
  return true;
}

std::string Real(double v) { return absl::StrFormat("%.17g", v); }

std::optional<BudgetState> ParseBudgetState(absl::string_view name) {
  for (BudgetState s : {BudgetState::kActive, BudgetState::kBudgetLow, BudgetState::kDepleted}) {
    if (name == BudgetStateName(s)) return s;
  }
  return std::nullopt;
}

}  // namespace

std::string FormatScript(const ScenarioScript& script) {
  std::string out = "# splitagent-script-1\n";
  absl::StrAppend(&out, "# name ", script.name, "\n# task ", TaskTypeName(script.task), "\n");
  for (const ScenarioTurn& t : script.turns) {
    absl::StrAppend(&out, Real(t.importance), "\t",
                    t.expected_tools.empty() ? "-" : absl::StrJoin(t.expected_tools, ","), "\t",
                    t.document_id.empty() ? "-" : t.document_id, "\t", t.instruction, "\n");
  }
  return out;
}

absl::StatusOr<ScenarioScript> ParseScript(absl::string_view text) {
  ScenarioScript script;
  bool have_task = false;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::string key, value;
    if (MetaLine(line, key, value)) {
      if (key == "name") script.name = value;
      if (key == "task") {
        auto task = ParseTaskType(value);
        if (!task) return Bad(line_no, absl::StrCat("unknown task '", value, "'"));
        script.task = *task;
        have_task = true;
      }
      continue;
    }
    std::vector<std::string> fields = absl::StrSplit(line, absl::MaxSplits('\t', 3));
    if (fields.size() != 4) return Bad(line_no, "expected 4 tab-separated fields");
    ScenarioTurn turn;
    if (!absl::SimpleAtod(fields[0], &turn.importance) || !(turn.importance >= 0.0) ||
        turn.importance > 1.0) {
      return Bad(line_no, "importance must be in [0, 1]");
    }
    if (fields[1] != "-") {
      for (absl::string_view tool : absl::StrSplit(fields[1], ',', absl::SkipWhitespace())) {
        turn.expected_tools.emplace_back(absl::StripAsciiWhitespace(tool));
      }
    }
    if (fields[2] != "-") turn.document_id = fields[2];
    turn.instruction = fields[3];
    script.turns.push_back(std::move(turn));
  }
  if (!have_task) return MakeError(ErrorKind::kSpecInvalid, "script has no task line");
  if (script.turns.empty()) return MakeError(ErrorKind::kSpecInvalid, "script has no turns");
  return script;
}

double SessionReport::CumulativeUtility() const {
  double sum = 0.0;
  for (const TurnReport& t : turns) {
    if (t.completed) sum += t.utility;
  }
  return sum;
}

double SessionReport::CompletionRate() const {
  if (turns.empty()) return 0.0;
  int done = 0;
  for (const TurnReport& t : turns) done += t.completed ? 1 : 0;
  return static_cast<double>(done) / static_cast<double>(turns.size());
}

double SessionReport::EpsilonSpent() const {
  double sum = 0.0;
  for (const TurnReport& t : turns) sum += t.epsilon_charged;
  return sum;
}

std::string FormatReport(const SessionReport& report) {
  std::string out = "# splitagent-report-1\n";
  absl::StrAppend(&out, "# session ", report.session_id, "\n# task ", TaskTypeName(report.task),
                  "\n# strategy ", StrategyName(report.strategy), "\n# epsilon_total ",
                  Real(report.epsilon_total), "\n");
  absl::StrAppend(&out,
                  "turn\tdocument\tepsilon_allocated\tepsilon_charged\tutility\tcompleted\t"
                  "tool_calls\tbudget_state\n");
  for (const TurnReport& t : report.turns) {
    absl::StrAppend(&out, t.turn, "\t", t.document_id.empty() ? "-" : t.document_id, "\t",
                    Real(t.epsilon_allocated), "\t", Real(t.epsilon_charged), "\t",
                    Real(t.utility), "\t", t.completed ? 1 : 0, "\t", t.tool_calls, "\t",
                    BudgetStateName(t.budget_state), "\n");
  }
  absl::StrAppend(&out, "# cumulative_utility ", Real(report.CumulativeUtility()),
                  "\n# completion_rate ", Real(report.CompletionRate()), "\n# epsilon_spent ",
                  Real(report.EpsilonSpent()), "\n");
  return out;
}

absl::StatusOr<SessionReport> ParseReport(absl::string_view text) {
  SessionReport report;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    ++line_no;
    std::string key, value;
    if (MetaLine(line, key, value)) {
      if (key == "session") report.session_id = value;
      if (key == "task") {
        auto task = ParseTaskType(value);
        if (!task) return Bad(line_no, "unknown task");
        report.task = *task;
      }
      if (key == "strategy") {
        auto strategy = ParseStrategy(value);
        if (!strategy) return Bad(line_no, "unknown strategy");
        report.strategy = *strategy;
      }
      if (key == "epsilon_total" && !absl::SimpleAtod(value, &report.epsilon_total)) {
        return Bad(line_no, "bad epsilon_total");
      }
      continue;
    }
    if (absl::StartsWith(line, "turn\t")) continue;
    std::vector<std::string> f = absl::StrSplit(line, '\t');
    TurnReport t;
    int completed = 0;
    if (f.size() != 8 || !absl::SimpleAtoi(f[0], &t.turn) ||
        !absl::SimpleAtod(f[2], &t.epsilon_allocated) ||
        !absl::SimpleAtod(f[3], &t.epsilon_charged) || !absl::SimpleAtod(f[4], &t.utility) ||
        !absl::SimpleAtoi(f[5], &completed) || !absl::SimpleAtoi(f[6], &t.tool_calls)) {
      return Bad(line_no, "malformed turn row");
    }
    auto state = ParseBudgetState(f[7]);
    if (!state) return Bad(line_no, "unknown budget state");
    t.budget_state = *state;
    t.document_id = f[1] == "-" ? "" : f[1];
    t.completed = completed != 0;
    report.turns.push_back(std::move(t));
  }
  return report;
}

}  // namespace splitagent
