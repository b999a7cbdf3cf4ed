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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

BudgetLedger Ledger(double total) { return *BudgetLedger::Create(total); }

TEST(BudgetLedgerTest, ChargesAccumulate) {
  BudgetLedger ledger = Ledger(5.0);
  EXPECT_DOUBLE_EQ(ledger.remaining(), 5.0);
  ASSERT_TRUE(ledger.Charge("q1", 0.5).ok());
  ASSERT_TRUE(ledger.Charge("q2", 0.3).ok());
  EXPECT_NEAR(ledger.spent(), 0.8, 1e-15);
  EXPECT_NEAR(ledger.remaining(), 4.2, 1e-15);
  EXPECT_EQ(ledger.entries().size(), 2u);
}

TEST(BudgetLedgerTest, OverdraftRejectedAndLedgerUnchanged) {
  BudgetLedger ledger = Ledger(5.0);
  ASSERT_TRUE(ledger.Charge("q1", 4.9).ok());
  const absl::Status s = ledger.Charge("q2", 0.2);
  EXPECT_TRUE(HasErrorKind(s, ErrorKind::kBudgetExceeded));
  EXPECT_DOUBLE_EQ(ledger.spent(), 4.9);
  EXPECT_EQ(ledger.entries().size(), 1u);
}

TEST(BudgetLedgerTest, RejectsBadTotalsAndCosts) {
  EXPECT_FALSE(BudgetLedger::Create(0.0).ok());
  EXPECT_FALSE(BudgetLedger::Create(-1.0).ok());
  BudgetLedger ledger = Ledger(1.0);
  EXPECT_FALSE(ledger.Charge("neg", -0.1).ok());
  EXPECT_FALSE(ledger.Charge("nan", std::nan("")).ok());
}

TEST(BudgetStateTest, Watermarks) {
  BudgetLedger ledger = Ledger(5.0);
  ASSERT_TRUE(ledger.Charge("a", 0.8).ok());
  EXPECT_EQ(ledger.state(), BudgetState::kActive);

  BudgetLedger low = Ledger(5.0);
  ASSERT_TRUE(low.Charge("a", 4.5).ok());
  // 0.5 / 5.0 = 0.1 sits under the configured watermark.
  ASSERT_LT(low.remaining() / low.total(), BudgetOptions{}.low_watermark);
  EXPECT_EQ(low.state(), BudgetState::kBudgetLow);

  EXPECT_EQ(Ledger(0.005).state(), BudgetState::kDepleted);
}

TEST(BudgetStateTest, DepletedAbsorbsCharges) {
  BudgetLedger ledger = Ledger(1.0);
  ASSERT_TRUE(ledger.Charge("a", 0.995).ok());
  ASSERT_EQ(ledger.state(), BudgetState::kDepleted);
  EXPECT_TRUE(HasErrorKind(ledger.Charge("b", 0.001), ErrorKind::kBudgetExceeded));
  EXPECT_TRUE(HasErrorKind(ledger.Charge("c", 0.005), ErrorKind::kBudgetExceeded));
}

TEST(BudgetLedgerTest, ClampToRemainingIsAccepted) {
  BudgetLedger ledger = Ledger(1.0);
  for (int i = 0; i < 7; ++i) ASSERT_TRUE(ledger.Charge("x", 0.1).ok());
  const double clamped = ledger.ClampToRemaining(10.0);
  EXPECT_LE(clamped, ledger.remaining());
  EXPECT_TRUE(ledger.Charge("rest", clamped).ok());
  EXPECT_LE(ledger.spent(), ledger.total());
}

TEST(BudgetLedgerTest, AuditLogOneLinePerEntry) {
  BudgetLedger ledger = Ledger(5.0);
  ASSERT_TRUE(ledger.Charge("q1", 0.5, 0, 100).ok());
  ASSERT_TRUE(ledger.Charge("q2", 0.25, 1, 200).ok());
  EXPECT_EQ(ledger.AuditLog(), "q1\t0.5\t0.5\t0\t100\nq2\t0.25\t0.75\t1\t200\n");
}

// Random operation sequences: spent never decreases, remaining never goes
// negative, and remaining tracks total minus the accepted costs.
TEST(BudgetLedgerProperty, RandomSequences) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double total = std::uniform_real_distribution<double>(0.05, 10.0)(gen);
    BudgetLedger ledger = Ledger(total);
    long double oracle = 0.0L;
    double last_spent = 0.0;
    for (int op = 0; op < 300; ++op) {
      const double cost = std::uniform_real_distribution<double>(0.0, total / 20)(gen);
      if (ledger.Charge("q", cost).ok()) oracle += cost;
      ASSERT_GE(ledger.spent(), last_spent);
      ASSERT_GE(ledger.remaining(), 0.0);
      ASSERT_NEAR(ledger.remaining(), static_cast<double>(total - oracle), 1e-12);
      last_spent = ledger.spent();
    }
  }
}

TEST(AllocateTest, Examples) {
  AllocationParams params{5.0, 0.2, 0.01};
  EXPECT_DOUBLE_EQ(Allocate(AllocationStrategy::kLinear, 0, 50, 5.0, 0.5, params), 0.1);
  EXPECT_DOUBLE_EQ(Allocate(AllocationStrategy::kAdaptive, 45, 50, 2.0, 0.5, params), 0.4);
  EXPECT_NEAR(Allocate(AllocationStrategy::kIntelligent, 45, 50, 2.0, 1.0, params),
              0.4 * 1.5, 1e-15);
  EXPECT_DOUBLE_EQ(Allocate(AllocationStrategy::kNaive, 3, 50, 5.0, 0.5, params), 0.2);
}

TEST(AllocateTest, NeverExceedsRemaining) {
  AllocationParams params{5.0, 0.2, 0.01};
  for (AllocationStrategy s : kAllStrategies) {
    for (double remaining : {0.0, 0.005, 0.05, 0.15, 3.0}) {
      for (int turn : {0, 25, 49}) {
        const double eps = Allocate(s, turn, 50, remaining, 1.0, params);
        EXPECT_LE(eps, remaining) << StrategyName(s);
        if (remaining < params.min_chargeable) EXPECT_EQ(eps, 0.0);
      }
    }
  }
}

TEST(AllocateTest, StrategyNamesRoundTrip) {
  for (AllocationStrategy s : kAllStrategies) EXPECT_EQ(ParseStrategy(StrategyName(s)), s);
  EXPECT_FALSE(ParseStrategy("greedy").has_value());
}

}  // namespace
}  // namespace splitagent
