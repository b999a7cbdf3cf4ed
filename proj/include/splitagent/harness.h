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

#ifndef SPLITAGENT_HARNESS_H_
#define SPLITAGENT_HARNESS_H_

// Desk-scale experiments: epsilon sweeps, budget strategy comparison,
// sanitizer comparison and the attack table. Everything runs against the
// in-process stub backend and is a pure function of the master seed.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "splitagent/adversary.h"
#include "splitagent/budget.h"
#include "splitagent/config.h"
#include "splitagent/datagen.h"
#include "splitagent/privacy_agent.h"
#include "splitagent/scenario.h"

namespace splitagent {

struct BenchRow {
  std::string label;
  double epsilon = 0.0;
  double accuracy = 0.0;  // completion x utility under the stub
  double privacy = 0.0;   // 1 - max attack success
  double product = 0.0;   // accuracy x privacy
  double latency_ms = 0.0;
  std::map<std::string, std::string> meta;
};

BenchRow MakeBenchRow(std::string label, double epsilon, double accuracy, double privacy,
                      double latency_ms = 0.0);

// Epsilon of the first row with the largest product; nullopt for no rows.
std::optional<double> ArgmaxProductEpsilon(const std::vector<BenchRow>& rows);

struct HarnessOptions {
  std::uint64_t seed = 0;
  int corpus_docs = 24;
  std::size_t min_bytes = 1024;
  std::size_t max_bytes = 2048;
  int script_turns = 10;
};

inline const std::vector<double>& DefaultEpsilonGrid() {
  static const std::vector<double> grid = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  return grid;
}

// Corpus with every source class.
absl::StatusOr<Corpus> BenchCorpus(const HarnessOptions& options);

// One script per task type over documents of the matching class. Turn
// importance is low except every fifth turn and the last five; every third
// turn asks for a tool.
std::vector<ScenarioScript> DefaultScripts(const Corpus& corpus, int turns);

// Evaluator ground truth for one captured session.
GroundTruth TruthForSession(const std::string& trace_name, const std::vector<ShareRecord>& shares,
                            const Corpus& corpus);

// Documents for the attack table. Reconstruction and inference run one
// single-turn session per document. Linkability judges 20 pairs: 10 of the
// same document, 5 against a sibling with new contact details
// (Email/Phone/AccountId) and 5 against a sibling with new identities
// (PersonName/OrgName).
struct AttackFixture {
  GenSpec spec;
  Corpus corpus;  // originals and siblings
  std::vector<std::string> target_ids;
  struct Pair {
    std::string left;
    std::string right;
    bool same_source = false;
  };
  std::vector<Pair> pairs;
};

absl::StatusOr<AttackFixture> BuildAttackFixture(std::uint64_t seed);

// k-candidate fixture: `documents` one-line documents "{PERSON} met {ORG}."
// with values drawn uniformly from k-entry dictionaries.
struct OracleFixture {
  SideInfo side_info;
  Corpus corpus;
};
absl::StatusOr<OracleFixture> BuildOracleFixture(int k, int documents, std::uint64_t seed);

struct CapturedTraces {
  NamedTraces traces;       // one per target document
  NamedTraces link_traces;  // two per linkability pair
  std::vector<TracePair> pairs;
  GroundTruth truth;
};

// Runs the fixture sessions under `config`, each with budget `epsilon` and
// the task matching the document's class.
absl::StatusOr<CapturedTraces> CaptureFixture(const AttackFixture& fixture,
                                              const SanitizerConfig& config, double epsilon,
                                              std::uint64_t seed);

// The three comparison configurations of the attack table.
struct NamedConfig {
  std::string label;  // "pass-through", "static-mask", "splitagent"
  SanitizerConfig config;
};
std::vector<NamedConfig> AttackConfigs(const SanitizerConfig& base);

absl::StatusOr<std::map<AttackType, AttackReport>> RunAttackSuite(const AttackFixture& fixture,
                                                                  const SanitizerConfig& config,
                                                                  double epsilon,
                                                                  std::uint64_t seed);

// Reconstruction success on the oracle fixture under full abstraction.
absl::StatusOr<AttackReport> OracleReconstruction(int k, int documents, std::uint64_t seed);

// One row per epsilon. Accuracy runs DefaultScripts with the Linear strategy
// and a budget of epsilon per turn; privacy runs the attack suite under the
// context-aware config at that epsilon.
absl::StatusOr<std::vector<BenchRow>> SweepEpsilon(const std::vector<double>& grid,
                                                   const HarnessOptions& options);

struct StrategyRow {
  AllocationStrategy strategy = AllocationStrategy::kLinear;
  double cumulative_utility = 0.0;
  double completion_rate = 0.0;
  double budget_used = 0.0;  // fraction of epsilon_total
  double efficiency = 0.0;   // cumulative utility / budget_used
};

// Budget simulation for the strategy comparison. A turn either needs data,
// and then charges its allocation, or is a data-free follow-up that charges
// nothing. A completed data turn is worth
//   importance * (1 - exp(-epsilon / saturation))
// and a data-free turn is worth its importance. A data turn whose
// allocation falls below min_chargeable, or whose charge is refused, is
// not completed and worth 0.
struct UtilityModel {
  double saturation = 0.1;
};

struct SimTurn {
  double importance = 0.0;
  bool needs_data = true;
};

// Same importance pattern as DefaultScripts; every fourth turn is data-free.
std::vector<SimTurn> StrategyScenario(int turns);

double ModelTurnUtility(double importance, double epsilon, const UtilityModel& model);

absl::StatusOr<StrategyRow> SimulateStrategy(AllocationStrategy strategy,
                                             const std::vector<SimTurn>& turns,
                                             double epsilon_total, const UtilityModel& model,
                                             const BudgetOptions& budget = {});

absl::StatusOr<std::vector<StrategyRow>> CompareStrategies(
    const std::vector<AllocationStrategy>& strategies, int turns, double epsilon_total,
    const UtilityModel& model = {});

struct SanitizerComparison {
  std::vector<std::string> labels;  // config labels, columns
  // task -> config label -> mean utility
  std::map<TaskType, std::map<std::string, double>> mean_utility;
  double Improvement(TaskType task, const std::string& a, const std::string& b) const;
};

// (a - b) / b.
double RelativeImprovement(double a, double b);

// Mean utility per task type over the documents of the matching class.
absl::StatusOr<SanitizerComparison> CompareSanitizers(const std::vector<NamedConfig>& configs,
                                                      const Corpus& corpus, double epsilon);
std::vector<NamedConfig> SanitizerConfigs(const SanitizerConfig& base);

// Comma-separated table with a header row. Doubles print with 3 decimals.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string FormatCsv(const CsvTable& table);
absl::Status EmitCsv(const CsvTable& table, const std::string& path);
std::string CsvNumber(double value);

CsvTable EpsilonCsv(const std::vector<BenchRow>& rows, bool with_latency = false);
CsvTable StrategyCsv(const std::vector<StrategyRow>& rows);
CsvTable SanitizerCsv(const SanitizerComparison& comparison);
CsvTable AttackCsv(const std::map<std::string, std::map<AttackType, AttackReport>>& by_config,
                   const std::vector<std::string>& config_order);

inline const std::vector<std::string>& BenchSuites() {
  static const std::vector<std::string> suites = {"epsilon", "strategies", "sanitizers",
                                                  "attacks"};
  return suites;
}

struct BenchOutput {
  std::map<std::string, std::string> csv;  // file name -> contents
  std::vector<std::string> violations;     // invariant failures
};

// Runs the named suites. SpecInvalid for an unknown suite.
absl::StatusOr<BenchOutput> RunBench(const std::vector<std::string>& suites,
                                     const HarnessOptions& options);

}  // namespace splitagent

#endif  // SPLITAGENT_HARNESS_H_
