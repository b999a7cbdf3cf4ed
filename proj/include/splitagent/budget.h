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

#ifndef SPLITAGENT_BUDGET_H_
#define SPLITAGENT_BUDGET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace splitagent {

struct BudgetOptions {
  double min_chargeable = 0.01;
  double low_watermark = 0.2;

  absl::Status Validate() const;
};

enum class BudgetState { kActive, kBudgetLow, kDepleted };

const char* BudgetStateName(BudgetState state);

struct LedgerEntry {
  std::string query_id;
  double cost = 0.0;
  double running_total = 0.0;
  int turn = 0;
  std::int64_t timestamp = 0;
};

// Append-only epsilon ledger under sequential composition. The running sum
// is compensated (Neumaier) and accumulated in entry order, so spent() is
// the correctly rounded sum of the accepted costs for any realistic entry
// count.
class BudgetLedger {
 public:
  static absl::StatusOr<BudgetLedger> Create(double total, BudgetOptions options = {});

  // Appends iff spent + cost <= total and the ledger is not DEPLETED.
  // BudgetExceeded otherwise, leaving the ledger unchanged.
  absl::Status Charge(absl::string_view query_id, double cost, int turn = 0,
                      std::int64_t timestamp = 0);

  double total() const { return total_; }
  double spent() const { return sum_ + compensation_; }
  double remaining() const;
  BudgetState state() const;
  const BudgetOptions& options() const { return options_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }

  // Largest value <= proposed that Charge would accept right now (0 if none).
  double ClampToRemaining(double proposed) const;

  // One line per entry: query id, cost, running total, turn, timestamp.
  std::string AuditLog() const;

 private:
  BudgetLedger(double total, BudgetOptions options) : total_(total), options_(options) {}
  bool Fits(double cost) const;

  double total_;
  BudgetOptions options_;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::vector<LedgerEntry> entries_;
};

BudgetState StateOf(const BudgetLedger& ledger);

enum class AllocationStrategy { kNaive, kLinear, kAdaptive, kIntelligent };

inline constexpr AllocationStrategy kAllStrategies[] = {
    AllocationStrategy::kNaive, AllocationStrategy::kLinear,
    AllocationStrategy::kAdaptive, AllocationStrategy::kIntelligent};

const char* StrategyName(AllocationStrategy strategy);
std::optional<AllocationStrategy> ParseStrategy(absl::string_view name);

struct AllocationParams {
  double initial_budget = 0.0;  // remaining at session start, for Linear
  double naive_cost = 0.2;
  double min_chargeable = 0.01;
};

// Proposed epsilon for `turn` (0-based) of `total_turns`. Never exceeds
// `remaining`; 0 once remaining < min_chargeable.
//   Naive        fixed naive_cost
//   Linear       initial_budget / total_turns
//   Adaptive     remaining / (total_turns - turn)
//   Intelligent  Adaptive * (0.5 + importance), clamped to
//                [min_chargeable, remaining]
double Allocate(AllocationStrategy strategy, int turn, int total_turns, double remaining,
                double importance, const AllocationParams& params);

}  // namespace splitagent

#endif  // SPLITAGENT_BUDGET_H_
