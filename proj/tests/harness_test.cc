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

#include "splitagent/harness.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "splitagent/status.h"
#include "splitagent/trace.h"

namespace splitagent {
namespace {

struct ReferenceRow {
  double epsilon;
  double accuracy;
  double privacy;
  double product;
};

// Reference privacy-utility table: accuracy, privacy and product columns.
const std::vector<ReferenceRow>& ReferenceTradeoff() {
  static const std::vector<ReferenceRow> rows = {
      {0.1, 0.782, 0.991, 0.775}, {0.5, 0.834, 0.945, 0.788}, {1.0, 0.867, 0.896, 0.777},
      {2.0, 0.892, 0.834, 0.744}, {5.0, 0.912, 0.672, 0.613}, {10.0, 0.923, 0.487, 0.450}};
  return rows;
}

std::vector<std::string> CsvLines(const std::string& csv) {
  return absl::StrSplit(csv, '\n', absl::SkipEmpty());
}

TEST(BenchRowTest, ReferenceProductsAndArgmax) {
  std::vector<BenchRow> rows;
  for (const ReferenceRow& p : ReferenceTradeoff()) {
    rows.push_back(MakeBenchRow("reference", p.epsilon, p.accuracy, p.privacy));
    EXPECT_NEAR(rows.back().product, p.product, 0.001) << p.epsilon;
  }
  EXPECT_EQ(ArgmaxProductEpsilon(rows), 0.5);
}

TEST(BenchRowTest, ArgmaxEdgeCases) {
  EXPECT_EQ(ArgmaxProductEpsilon({}), std::nullopt);
  EXPECT_EQ(ArgmaxProductEpsilon({MakeBenchRow("x", 2.0, 0.5, 0.5)}), 2.0);
  EXPECT_EQ(ArgmaxProductEpsilon({MakeBenchRow("x", 0.1, 0.5, 0.5),
                                  MakeBenchRow("x", 1.0, 0.25, 1.0)}),
            0.1);
}

TEST(RelativeImprovementTest, Fixture) {
  EXPECT_DOUBLE_EQ(RelativeImprovement(0.9, 0.72), 0.25);
  EXPECT_DOUBLE_EQ(RelativeImprovement(0.5, 0.5), 0.0);
}

TEST(CompareSanitizersTest, IdenticalConfigsGiveZeroImprovement) {
  HarnessOptions options;
  options.corpus_docs = 12;
  auto corpus = BenchCorpus(options);
  ASSERT_TRUE(corpus.ok());
  const SanitizerConfig base = DefaultSanitizerConfig();
  auto cmp = CompareSanitizers({{"a", base}, {"b", base}}, *corpus, 1.0);
  ASSERT_TRUE(cmp.ok());
  ASSERT_EQ(cmp->mean_utility.size(), std::size(kAllTaskTypes));
  for (const auto& [task, row] : cmp->mean_utility) {
    EXPECT_DOUBLE_EQ(cmp->Improvement(task, "a", "b"), 0.0);
  }
}

TEST(CompareSanitizersTest, ContextAwareBeatsStaticRegexPerTask) {
  HarnessOptions options;
  auto corpus = BenchCorpus(options);
  ASSERT_TRUE(corpus.ok());
  auto cmp = CompareSanitizers(SanitizerConfigs(DefaultSanitizerConfig()), *corpus, 1.0);
  ASSERT_TRUE(cmp.ok());
  for (TaskType task : kAllTaskTypes) {
    EXPECT_GT(cmp->Improvement(task, "context-aware", "static-regex"), 0.0) << TaskTypeName(task);
  }
}

TEST(BenchCorpusTest, EveryClassPresent) {
  HarnessOptions options;
  options.corpus_docs = 7;
  auto corpus = BenchCorpus(options);
  ASSERT_TRUE(corpus.ok());
  EXPECT_EQ(corpus->documents.size(), 7u);
  std::set<SourceClass> seen;
  for (const Document& d : corpus->documents) seen.insert(d.source_class);
  EXPECT_EQ(seen.size(), std::size(kAllSourceClasses));
}

TEST(CsvTest, EmptyTableIsHeaderOnly) {
  EXPECT_EQ(FormatCsv(EpsilonCsv({})), "config,epsilon,accuracy,privacy,product\n");
  EXPECT_EQ(FormatCsv(EpsilonCsv({}, true)),
            "config,epsilon,accuracy,privacy,product,latency_ms\n");
}

TEST(CsvTest, SixRowsAndQuoting) {
  std::vector<BenchRow> rows;
  for (const ReferenceRow& p : ReferenceTradeoff()) {
    rows.push_back(MakeBenchRow("reference", p.epsilon, p.accuracy, p.privacy));
  }
  const auto lines = CsvLines(FormatCsv(EpsilonCsv(rows)));
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[2], "reference,0.500,0.834,0.945,0.788");

  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"x,y", "say \"hi\""}};
  EXPECT_EQ(FormatCsv(t), "a,b\n\"x,y\",\"say \"\"hi\"\"\"\n");
}

TEST(CsvTest, ReEmitIsByteIdentical) {
  std::vector<BenchRow> rows;
  for (const ReferenceRow& p : ReferenceTradeoff()) {
    rows.push_back(MakeBenchRow("reference", p.epsilon, p.accuracy, p.privacy));
  }
  const auto dir = std::filesystem::temp_directory_path() / "splitagent_csv_test";
  std::filesystem::create_directories(dir);
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  ASSERT_TRUE(EmitCsv(EpsilonCsv(rows), a).ok());
  ASSERT_TRUE(EmitCsv(EpsilonCsv(rows), b).ok());
  EXPECT_EQ(*ReadFile(a), *ReadFile(b));
  EXPECT_EQ(*ReadFile(a), FormatCsv(EpsilonCsv(rows)));
  std::filesystem::remove_all(dir);
}

TEST(DefaultScriptsTest, ImportanceAndTools) {
  HarnessOptions options;
  auto corpus = BenchCorpus(options);
  ASSERT_TRUE(corpus.ok());
  const auto scripts = DefaultScripts(*corpus, 12);
  ASSERT_EQ(scripts.size(), std::size(kAllTaskTypes));
  for (const ScenarioScript& s : scripts) {
    ASSERT_EQ(s.turns.size(), 12u);
    for (int t = 0; t < 12; ++t) {
      const bool important = t % 5 == 4 || t >= 7;
      EXPECT_DOUBLE_EQ(s.turns[t].importance, important ? 1.0 : 0.2);
      EXPECT_EQ(s.turns[t].expected_tools.size(), t % 3 == 2 ? 1u : 0u);
      EXPECT_FALSE(s.turns[t].document_id.empty());
    }
  }
}

TEST(TruthForSessionTest, OffsetsAcrossJoinedDocuments) {
  Corpus corpus;
  corpus.documents = {{"d1", std::nullopt, "t\nAnn met Bo.", SourceClass::kContract},
                      {"d2", std::nullopt, "Cy met Di.", SourceClass::kContract}};
  Entity ann{{2, 5}, EntityKind::kPersonName, "Ann", SensitivityLevel::kConfidential};
  Entity cy{{0, 2}, EntityKind::kPersonName, "Cy", SensitivityLevel::kConfidential};
  corpus.annotations.by_document["d1"] = {{ann, 1, 0, 0}};
  corpus.annotations.by_document["d2"] = {{cy, 0, 0, 0}};
  ShareRecord share;
  share.document_ids = {"d1", "d2"};
  const GroundTruth truth = TruthForSession("tr", {share}, corpus);
  ASSERT_EQ(truth.slots.size(), 2u);
  // "t\nAnn met Bo." + "\n\n" puts d2 on line 3 of the joined text.
  EXPECT_EQ(truth.slots.at({"tr", 0, 1, 0}).surface, "Ann");
  EXPECT_EQ(truth.slots.at({"tr", 0, 3, 0}).surface, "Cy");
}

// Closed form for the simulated scenario under a constant per-turn
// allocation that never runs dry.
double ConstantAllocationUtility(int turns, double epsilon, const UtilityModel& model) {
  double total = 0.0;
  for (int t = 0; t < turns; ++t) {
    const double importance = (t % 5 == 4 || t >= turns - 5) ? 1.0 : 0.2;
    if (t % 4 == 3) {
      total += importance;
    } else {
      total += importance * (1.0 - std::exp(-epsilon / model.saturation));
    }
  }
  return total;
}

TEST(StrategySimulationTest, LinearMatchesClosedForm) {
  const UtilityModel model;
  auto row = SimulateStrategy(AllocationStrategy::kLinear, StrategyScenario(50), 5.0, model);
  ASSERT_TRUE(row.ok());
  EXPECT_NEAR(row->cumulative_utility, ConstantAllocationUtility(50, 0.1, model), 1e-9);
  EXPECT_DOUBLE_EQ(row->completion_rate, 1.0);
  // 38 data turns at 0.1 each.
  EXPECT_NEAR(row->budget_used, 3.8 / 5.0, 1e-12);
}

TEST(StrategySimulationTest, OrderingAndBudget) {
  auto rows = CompareStrategies({std::begin(kAllStrategies), std::end(kAllStrategies)}, 50, 5.0);
  ASSERT_TRUE(rows.ok());
  ASSERT_EQ(rows->size(), 4u);
  for (std::size_t i = 1; i < rows->size(); ++i) {
    EXPECT_GE((*rows)[i].cumulative_utility, (*rows)[i - 1].cumulative_utility)
        << StrategyName((*rows)[i].strategy);
  }
  for (const StrategyRow& r : *rows) EXPECT_LE(r.budget_used, 1.0 + 1e-12);
  EXPECT_LT((*rows)[0].completion_rate, 1.0);  // Naive runs dry
}

TEST(StrategySimulationTest, SingleTurnLinearEqualsAdaptive) {
  const std::vector<SimTurn> one = {{0.5, true}};
  auto linear = SimulateStrategy(AllocationStrategy::kLinear, one, 1.0, {});
  auto adaptive = SimulateStrategy(AllocationStrategy::kAdaptive, one, 1.0, {});
  ASSERT_TRUE(linear.ok() && adaptive.ok());
  EXPECT_DOUBLE_EQ(linear->cumulative_utility, adaptive->cumulative_utility);
  EXPECT_DOUBLE_EQ(linear->budget_used, 1.0);
}

TEST(StrategySimulationTest, RejectsBadInput) {
  EXPECT_TRUE(HasErrorKind(SimulateStrategy(AllocationStrategy::kLinear, {}, 1.0, {}).status(),
                           ErrorKind::kSpecInvalid));
  UtilityModel flat;
  flat.saturation = 0.0;
  EXPECT_TRUE(HasErrorKind(
      SimulateStrategy(AllocationStrategy::kLinear, StrategyScenario(3), 1.0, flat).status(),
      ErrorKind::kConfigInvalid));
  EXPECT_TRUE(HasErrorKind(CompareStrategies({AllocationStrategy::kNaive}, 0, 1.0).status(),
                           ErrorKind::kSpecInvalid));
}

TEST(SweepEpsilonTest, MonotoneAccuracyAndPrivacy) {
  HarnessOptions options;
  options.corpus_docs = 12;
  options.script_turns = 6;
  auto rows = SweepEpsilon(DefaultEpsilonGrid(), options);
  ASSERT_TRUE(rows.ok()) << rows.status();
  ASSERT_EQ(rows->size(), DefaultEpsilonGrid().size());
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const BenchRow& r = (*rows)[i];
    EXPECT_DOUBLE_EQ(r.product, r.accuracy * r.privacy);
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    if (i == 0) continue;
    EXPECT_GE(r.accuracy, (*rows)[i - 1].accuracy) << r.epsilon;
    EXPECT_LE(r.privacy, (*rows)[i - 1].privacy) << r.epsilon;
  }
}

TEST(OracleReconstructionTest, UniformCandidates) {
  auto report = OracleReconstruction(4, 500, 0);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->trials, 1000);
  EXPECT_NEAR(report->success_rate, 0.25, 0.05);
}

TEST(RunBenchTest, UnknownSuiteAndDeterminism) {
  EXPECT_TRUE(HasErrorKind(RunBench({"nope"}, {}).status(), ErrorKind::kSpecInvalid));
  auto a = RunBench({"strategies", "sanitizers"}, {});
  auto b = RunBench({"strategies", "sanitizers"}, {});
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->csv, b->csv);
  EXPECT_TRUE(a->violations.empty());
  EXPECT_EQ(a->csv.size(), 2u);
  EXPECT_EQ(CsvLines(a->csv.at("strategies.csv")).size(), 5u);
}

}  // namespace
}  // namespace splitagent
