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

#include "splitagent/budget.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "splitagent/status.h"

namespace splitagent {

absl::Status BudgetOptions::Validate() const {
  if (!(min_chargeable > 0.0) || !std::isfinite(min_chargeable)) {
    return MakeError(ErrorKind::kConfigInvalid, "min_chargeable must be positive");
  }
  if (!(low_watermark > 0.0 && low_watermark < 1.0)) {
    return MakeError(ErrorKind::kConfigInvalid, "low_watermark must lie in (0, 1)");
  }
  return absl::OkStatus();
}

const char* BudgetStateName(BudgetState state) {
  switch (state) {
    case BudgetState::kActive: return "ACTIVE";
    case BudgetState::kBudgetLow: return "BUDGET_LOW";
    case BudgetState::kDepleted: return "DEPLETED";
  }
  return "?";
}

absl::StatusOr<BudgetLedger> BudgetLedger::Create(double total, BudgetOptions options) {
  if (!(total > 0.0) || !std::isfinite(total)) {
    return MakeError(ErrorKind::kConfigInvalid,
                     absl::StrCat("budget total must be positive, got ", total));
  }
  SPLITAGENT_RETURN_IF_ERROR(options.Validate());
  return BudgetLedger(total, options);
}

double BudgetLedger::remaining() const { return std::max(0.0, total_ - spent()); }

BudgetState BudgetLedger::state() const {
  const double left = remaining();
  if (left < options_.min_chargeable) return BudgetState::kDepleted;
  if (left / total_ < options_.low_watermark) return BudgetState::kBudgetLow;
  return BudgetState::kActive;
}

bool BudgetLedger::Fits(double cost) const {
  // Two-sum of the compensated total and the cost, compared against total.
  const double s = sum_ + cost;
  const double err = std::abs(sum_) >= std::abs(cost) ? (sum_ - s) + cost : (cost - s) + sum_;
  return s + (compensation_ + err) <= total_;
}

absl::Status BudgetLedger::Charge(absl::string_view query_id, double cost, int turn,
                                  std::int64_t timestamp) {
  if (!(cost > 0.0) || !std::isfinite(cost)) {
    return absl::InvalidArgumentError(absl::StrCat("charge must be positive, got ", cost));
  }
  if (state() == BudgetState::kDepleted) {
    return MakeError(ErrorKind::kBudgetExceeded,
                     absl::StrCat("ledger is depleted; rejected ", query_id));
  }
  if (!Fits(cost)) {
    return MakeError(ErrorKind::kBudgetExceeded,
                     absl::StrFormat("charge %.17g exceeds remaining %.17g", cost,
                                     remaining()));
  }
  const double s = sum_ + cost;
  compensation_ +=
      std::abs(sum_) >= std::abs(cost) ? (sum_ - s) + cost : (cost - s) + sum_;
  sum_ = s;
  entries_.push_back({std::string(query_id), cost, spent(), turn, timestamp});
  return absl::OkStatus();
}

double BudgetLedger::ClampToRemaining(double proposed) const {
  if (!(proposed > 0.0) || state() == BudgetState::kDepleted) return 0.0;
  double c = std::min(proposed, remaining());
  while (c > 0.0 && !Fits(c)) c = std::nextafter(c, 0.0);
  return c;
}

std::string BudgetLedger::AuditLog() const {
  std::string out;
  for (const LedgerEntry& e : entries_) {
    absl::StrAppendFormat(&out, "%s\t%.17g\t%.17g\t%d\t%d\n", e.query_id, e.cost,
                          e.running_total, e.turn, e.timestamp);
  }
  return out;
}

BudgetState StateOf(const BudgetLedger& ledger) { return ledger.state(); }

const char* StrategyName(AllocationStrategy strategy) {
  switch (strategy) {
    case AllocationStrategy::kNaive: return "naive";
    case AllocationStrategy::kLinear: return "linear";
    case AllocationStrategy::kAdaptive: return "adaptive";
    case AllocationStrategy::kIntelligent: return "intelligent";
  }
  return "?";
}

std::optional<AllocationStrategy> ParseStrategy(absl::string_view name) {
  for (AllocationStrategy s : kAllStrategies) {
    if (name == StrategyName(s)) return s;
  }
  return std::nullopt;
}

double Allocate(AllocationStrategy strategy, int turn, int total_turns, double remaining,
                double importance, const AllocationParams& params) {
  if (!(remaining >= params.min_chargeable) || total_turns <= 0) return 0.0;
  const int turns_left = std::max(1, total_turns - turn);
  double proposal = 0.0;
  switch (strategy) {
    case AllocationStrategy::kNaive:
      proposal = params.naive_cost;
      break;
    case AllocationStrategy::kLinear:
      proposal = params.initial_budget / total_turns;
      break;
    case AllocationStrategy::kAdaptive:
      proposal = remaining / turns_left;
      break;
    case AllocationStrategy::kIntelligent:
      proposal = remaining / turns_left * (0.5 + std::clamp(importance, 0.0, 1.0));
      proposal = std::max(proposal, params.min_chargeable);
      break;
  }
  return std::min(proposal, remaining);
}

}  // namespace splitagent
