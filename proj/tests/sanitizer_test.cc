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

#include "splitagent/sanitizer.h"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "splitagent/config.h"
#include "splitagent/status.h"
#include "splitagent/utility.h"

namespace splitagent {
namespace {

const SanitizerConfig& Cfg() {
  static const auto* cfg = new SanitizerConfig(DefaultSanitizerConfig());
  return *cfg;
}

Document Doc(std::string body, std::string id = "d1") {
  return Document{std::move(id), std::nullopt, std::move(body), SourceClass::kContract};
}

const TaskProfile& Profile(TaskType task) { return *Cfg().ProfileFor(task); }

TEST(ExtractEntitiesTest, Email) {
  auto entities = ExtractEntities(Doc("Contact alice@acme.example for terms."), Cfg().rules);
  ASSERT_EQ(entities.size(), 1u);
  EXPECT_EQ(entities[0].kind, EntityKind::kEmail);
  EXPECT_EQ(entities[0].surface, "alice@acme.example");
  EXPECT_EQ(entities[0].span.start, 8u);
}

TEST(ExtractEntitiesTest, EmptyBody) {
  EXPECT_TRUE(ExtractEntities(Doc(""), Cfg().rules).empty());
}

TEST(ExtractEntitiesTest, ContractSentence) {
  auto entities =
      ExtractEntities(Doc("ACME Corp will pay $150,000 by March 15"), Cfg().rules);
  ASSERT_EQ(entities.size(), 3u);
  EXPECT_EQ(entities[0].kind, EntityKind::kOrgName);
  EXPECT_EQ(entities[0].surface, "ACME Corp");
  EXPECT_EQ(entities[1].kind, EntityKind::kMoneyAmount);
  EXPECT_EQ(entities[1].surface, "$150,000");
  EXPECT_EQ(entities[2].kind, EntityKind::kDate);
  EXPECT_EQ(entities[2].surface, "March 15");
}

TEST(ExtractEntitiesTest, LongestMatchWinsThenRuleOrder) {
  // The URL contains an email-like run; the URL match is longer.
  const std::string body = "see https://portal.example/u/bob@corp.example/x now";
  auto entities = ExtractEntities(Doc(body), Cfg().rules);
  ASSERT_EQ(entities.size(), 1u);
  EXPECT_EQ(entities[0].kind, EntityKind::kUrl);

  // Equal-length overlap: two rules over the same span, first rule wins.
  std::vector<ExtractionRule> rules = {
      {EntityKind::kOrgName, "", {"Hooli"}, SensitivityLevel::kInternal},
      {EntityKind::kPersonName, "", {"Hooli"}, SensitivityLevel::kConfidential}};
  auto ruleset = Ruleset::Compile(rules);
  ASSERT_TRUE(ruleset.ok());
  auto tie = ExtractEntities(Doc("Hooli"), *ruleset);
  ASSERT_EQ(tie.size(), 1u);
  EXPECT_EQ(tie[0].kind, EntityKind::kOrgName);
}

TEST(ExtractEntitiesTest, SpansMatchBodyAndDoNotOverlap) {
  const std::string body =
      "Dr. Grace Kim (grace.kim@globex.example, +1 (415) 555-0188) moved ACCT-0042917 "
      "to 12 Maple Street on 2024-03-09; token sk_live_ABCDEFGHIJ12 expires 3/31/2025. "
      "Fee $2.5 million or 12.5% of proprietary_risk_model output.";
  auto entities = ExtractEntities(Doc(body), Cfg().rules);
  ASSERT_GE(entities.size(), 9u);
  for (std::size_t i = 0; i < entities.size(); ++i) {
    EXPECT_TRUE(EntityMatchesBody(entities[i], body)) << entities[i].surface;
    if (i > 0) {
      EXPECT_LE(entities[i - 1].span.end, entities[i].span.start);
    }
  }
}

TEST(SensitivityOfTest, CredentialCapsAtSecret) {
  Entity e{{0, 5}, EntityKind::kCredential, "x", SensitivityLevel::kSecret};
  for (TaskType task : kAllTaskTypes) {
    EXPECT_EQ(SensitivityOf(e, Profile(task)), SensitivityLevel::kSecret);
  }
}

TEST(SensitivityOfTest, AbstractKindsRaiseByOne) {
  Entity money{{0, 5}, EntityKind::kMoneyAmount, "$5", SensitivityLevel::kConfidential};
  // Oracle: +1 when the kind is listed as abstract in the shipped profile.
  const TaskProfile& contract = Profile(TaskType::kContractReview);
  ASSERT_TRUE(contract.abstract_kinds.count(EntityKind::kMoneyAmount));
  EXPECT_EQ(SensitivityOf(money, contract), SensitivityLevel::kRestricted);

  Entity date{{0, 5}, EntityKind::kDate, "May 1", SensitivityLevel::kInternal};
  const TaskProfile& code = Profile(TaskType::kCodeReview);
  ASSERT_TRUE(code.preserve_kinds.count(EntityKind::kDate));
  EXPECT_EQ(SensitivityOf(date, code), SensitivityLevel::kInternal);
}

TEST(PrivacyThresholdTest, DefaultTable) {
  // Oracle: {eps<0.5 -> 0, eps<2 -> 1, eps<5 -> 2, else 3}.
  auto oracle = [](double eps) { return eps < 0.5 ? 0 : eps < 2 ? 1 : eps < 5 ? 2 : 3; };
  for (double eps : {0.0, 0.1, 0.49, 0.5, 1.0, 1.99, 2.0, 4.9, 5.0, 10.0, 1e9}) {
    EXPECT_EQ(Ordinal(PrivacyThreshold(eps, Cfg())), oracle(eps)) << eps;
  }
  EXPECT_EQ(PrivacyThreshold(0.1, Cfg()), SensitivityLevel::kPublic);
  EXPECT_EQ(PrivacyThreshold(10.0, Cfg()), SensitivityLevel::kRestricted);
}

TEST(GenerateAbstractionTest, QualifierRules) {
  const TaskProfile& profile = Profile(TaskType::kContractReview);
  AbstractionMap map(TaskType::kContractReview);
  auto token = [&](EntityKind kind, std::string surface, std::size_t at) {
    Entity e{{at, at + surface.size()}, kind, surface, SensitivityLevel::kConfidential};
    return GenerateAbstraction(e, profile, map, Cfg()).label;
  };
  EXPECT_EQ(token(EntityKind::kOrgName, "ACME Corp", 0), "COMPANY_A");
  EXPECT_EQ(token(EntityKind::kMoneyAmount, "$150,000", 10), "AMOUNT_LARGE");
  EXPECT_EQ(token(EntityKind::kDate, "March 15", 20), "DATE_Q1");
  EXPECT_EQ(token(EntityKind::kOrgName, "Globex Inc", 30), "COMPANY_B");
  EXPECT_EQ(token(EntityKind::kOrgName, "ACME Corp", 40), "COMPANY_A");
  EXPECT_EQ(token(EntityKind::kMoneyAmount, "$200,000", 50), "AMOUNT_LARGEB");
  EXPECT_EQ(token(EntityKind::kMoneyAmount, "$150,000", 60), "AMOUNT_LARGE");
  EXPECT_EQ(token(EntityKind::kMoneyAmount, "$900", 70), "AMOUNT_SMALL");
  EXPECT_EQ(token(EntityKind::kMoneyAmount, "$50,000", 80), "AMOUNT_MEDIUM");
  EXPECT_EQ(token(EntityKind::kDate, "2024-11-02", 90), "DATE_Q4");
  EXPECT_EQ(token(EntityKind::kDate, "7/4/2025", 100), "DATE_Q3");
  EXPECT_EQ(token(EntityKind::kPercentage, "55%", 110), "PERCENT_HIGH");
  EXPECT_EQ(map.Vocabulary().size(), 10u);
}

TEST(ApplyAbstractionsTest, EmptyMapIsIdentity) {
  Document doc = Doc("nothing to see");
  auto text = ApplyAbstractions(doc, AbstractionMap());
  ASSERT_TRUE(text.ok());
  EXPECT_EQ(*text, doc.body);
}

TEST(ApplyAbstractionsTest, AdjacentEntitiesMatchNaiveRescan) {
  Document doc = Doc("ACME CorpGlobex Inc$5 tail");
  AbstractionMap map;
  const std::vector<std::pair<Entity, std::string>> items = {
      {{{0, 9}, EntityKind::kOrgName, "ACME Corp"}, "COMPANY_A"},
      {{{9, 19}, EntityKind::kOrgName, "Globex Inc"}, "COMPANY_B"},
      {{{19, 21}, EntityKind::kMoneyAmount, "$5"}, "AMOUNT_SMALL"}};
  for (const auto& [e, label] : items) ASSERT_TRUE(map.Add(e, {label}).ok());
  auto text = ApplyAbstractions(doc, map);
  ASSERT_TRUE(text.ok());
  // Oracle: left-to-right rewrite that rescans for each surface.
  std::string naive = doc.body;
  for (const auto& [e, label] : items) {
    naive.replace(naive.find(e.surface), e.surface.size(), label);
  }
  EXPECT_EQ(*text, naive);
  EXPECT_TRUE(IsLeakFree(*text, map.Surfaces()));
}

TEST(ApplyAbstractionsTest, OverlapIsAnError) {
  Document doc = Doc("ACME Corp pays");
  AbstractionMap map;
  ASSERT_TRUE(map.Add({{0, 9}, EntityKind::kOrgName, "ACME Corp"}, {"COMPANY_A"}).ok());
  ASSERT_TRUE(map.Add({{5, 14}, EntityKind::kPersonName, "Corp pays"}, {"PERSON_A"}).ok());
  auto text = ApplyAbstractions(doc, map);
  EXPECT_TRUE(HasErrorKind(text.status(), ErrorKind::kOverlappingSpans));
}

TEST(AddDpNoiseTest, ZeroEpsilonAndIdentity) {
  Rng rng(1);
  EXPECT_TRUE(HasErrorKind(AddDpNoise("x", {}, 0.0, Cfg(), rng).status(),
                           ErrorKind::kZeroEpsilon));
  auto same = AddDpNoise("unchanged", {}, 1.0, Cfg(), rng);
  ASSERT_TRUE(same.ok());
  EXPECT_EQ(*same, "unchanged");
  EXPECT_DOUBLE_EQ(*LaplaceScale(1.0, 0.5), 2.0);
}

TEST(AddDpNoiseTest, GoldenSeed42) {
  SanitizerConfig cfg = Cfg();
  cfg.dp_sensitivity[EntityKind::kMoneyAmount] = 1.0;
  cfg.amount_buckets = {{99.0, "LOW"}, {100.0, "NEAR"}, {101.0, "AT"},
                        {std::numeric_limits<double>::infinity(), "HIGH"}};
  const std::string text = "total $100 due";
  Entity field{{6, 10}, EntityKind::kMoneyAmount, "$100"};
  Rng rng(42);
  auto noisy = AddDpNoise(text, {field}, 1.0, cfg, rng);
  ASSERT_TRUE(noisy.ok());
  // Oracle: redraw with an identically seeded generator.
  Rng replay(42);
  const double v = 100.0 + SampleLaplace(replay, 1.0);
  const std::string expected_label = v < 99 ? "LOW" : v < 100 ? "NEAR" : v < 101 ? "AT" : "HIGH";
  EXPECT_EQ(*noisy, "total AMOUNT_" + expected_label + " due");
  EXPECT_EQ(*noisy, "total AMOUNT_AT due");  // frozen
}

TEST(EstimateUtilityTest, IdentityAndFullRedaction) {
  Document doc = Doc("1. Payment\nThe party shall pay ACME Corp on time.");
  for (TaskType task : kAllTaskTypes) {
    auto entities = ExtractEntities(doc, Cfg().rules);
    EXPECT_DOUBLE_EQ(EstimateUtility(task, doc, doc.body, Profile(task), entities).value, 1.0);
    EXPECT_DOUBLE_EQ(
        EstimateUtility(task, doc, "X_A X_B X_C", Profile(task), entities).value, 0.0);
  }
}

TEST(EstimateUtilityTest, ContractSentenceHandCount) {
  Document doc = Doc("ACME Corp will pay $150,000 by March 15");
  auto entities = ExtractEntities(doc, Cfg().rules);
  // Hand count: no headings and no preserved kinds present, so only
  // legal_terms (w 0.3, "pay" kept 1/1) and word_retention (w 0.2, kept
  // will/pay/by of 9 words) inform the score: (0.3 + 0.2/3) / 0.5.
  const double expected = (0.3 * 1.0 + 0.2 * (3.0 / 9.0)) / 0.5;
  UtilityScore u = EstimateUtility(TaskType::kContractReview, doc,
                                   "COMPANY_A will pay AMOUNT_LARGE by DATE_Q1",
                                   Profile(TaskType::kContractReview), entities);
  EXPECT_NEAR(u.value, expected, 1e-12);
  EXPECT_NEAR(u.value, 0.733333333333, 1e-9);
}

TEST(SanitizeTest, ContractGolden) {
  auto result = Sanitize(Doc("ACME Corp will pay $150,000 by March 15"),
                         TaskType::kContractReview, 0.5, Cfg());
  ASSERT_TRUE(result.ok()) << result.status();
  EXPECT_EQ(result->document.body, "COMPANY_A will pay AMOUNT_LARGE by DATE_Q1");
  EXPECT_TRUE(result->utility_status.ok());
  EXPECT_DOUBLE_EQ(result->document.epsilon_spent, 0.5);
}

TEST(SanitizeTest, NoEntitiesChargesFloor) {
  for (double eps : {0.1, 0.5, 3.0}) {
    auto result = Sanitize(Doc("plain words only"), TaskType::kCustomerSupport, eps, Cfg());
    ASSERT_TRUE(result.ok());
    EXPECT_EQ(result->document.body, "plain words only");
    EXPECT_DOUBLE_EQ(result->document.epsilon_spent, Cfg().floor_cost);
    EXPECT_DOUBLE_EQ(result->document.utility.value, 1.0);
  }
}

TEST(SanitizeTest, SupportTicketWalkthrough) {
  const std::string body =
      "Ticket from Maria Garcia (ACCT-0098812): I am frustrated, the refund failed "
      "again on March 3. Please call 415-555-0134. Status page https://status.example/x";
  auto result = Sanitize(Doc(body), TaskType::kCustomerSupport, 0.5, Cfg());
  ASSERT_TRUE(result.ok());
  // Walkthrough at eps 0.5 (threshold 1): Person 2+1, Account 2+1, Phone 2+1
  // are abstracted; Date and Url are preserved at level 1 and kept.
  EXPECT_EQ(result->document.body,
            "Ticket from PERSON_A (ACCOUNT_A): I am frustrated, the refund failed "
            "again on March 3. Please call PHONE_A. Status page https://status.example/x");
  for (const char* word : {"frustrated", "refund", "failed"}) {
    EXPECT_NE(result->document.body.find(word), std::string::npos);
  }
}

TEST(SanitizeTest, TaskDifferentiation) {
  const std::string body =
      "Dr. Hiro Tanaka updated internal_price_engine on 2024-05-01 with key "
      "ghp_abcdefghij0123 for Globex Inc at $12,000.";
  auto contract = Sanitize(Doc(body), TaskType::kContractReview, 1.0, Cfg());
  auto code = Sanitize(Doc(body), TaskType::kCodeReview, 1.0, Cfg());
  ASSERT_TRUE(contract.ok() && code.ok());
  EXPECT_NE(contract->map.Vocabulary(), code->map.Vocabulary());
  EXPECT_NE(code->document.body.find("internal_price_engine"), std::string::npos);
  EXPECT_NE(code->document.body.find("2024-05-01"), std::string::npos);
}

TEST(SanitizeTest, ThresholdMonotonicity) {
  const std::string body =
      "Wayne Group pays Olivia Brown $8,000 on June 2 at 4.5% (olivia@wayne.example, "
      "https://wayne.example/contract).";
  const std::vector<double> grid = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
  for (TaskType task : kAllTaskTypes) {
    std::vector<std::string> previous;
    for (std::size_t i = grid.size(); i-- > 0;) {
      auto r = Sanitize(Doc(body), task, grid[i], Cfg());
      ASSERT_TRUE(r.ok());
      std::vector<std::string> surfaces = r->map.Surfaces();
      for (const std::string& s : previous) {
        EXPECT_NE(std::find(surfaces.begin(), surfaces.end(), s), surfaces.end())
            << TaskTypeName(task) << " eps " << grid[i] << " lost " << s;
      }
      previous = surfaces;
    }
  }
}

TEST(SanitizeTest, Deterministic) {
  const std::string body = "Umbrella Corp owes $45,000 and $3,100 by 2025-02-01.";
  for (double eps : {0.1, 6.0}) {
    auto a = Sanitize(Doc(body), TaskType::kFinancialAnalysis, eps, Cfg());
    auto b = Sanitize(Doc(body), TaskType::kFinancialAnalysis, eps, Cfg());
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_EQ(a->document, b->document);
    EXPECT_EQ(a->map.entries(), b->map.entries());
  }
}

TEST(SanitizeTest, DpBranchReleasesOnlyBucketLabels) {
  const std::string body = "Umbrella Corp owes $45,000 and $3,100 by 2025-02-01.";
  auto r = Sanitize(Doc(body), TaskType::kFinancialAnalysis, 6.0, Cfg());
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->noised.size(), 2u);
  EXPECT_DOUBLE_EQ(r->document.epsilon_spent, 6.0);
  EXPECT_TRUE(IsLeakFree(r->document.body, r->HiddenSurfaces()));
  EXPECT_EQ(r->document.body.find('$'), std::string::npos);
}

TEST(SanitizeTest, ResidualOccurrenceInsideKeptEntityIsHidden) {
  // "Hooli Inc" is abstracted; the preserved URL path repeats it verbatim.
  const std::string body = "Hooli Inc signed. See https://x.example/Hooli Inc";
  SanitizerConfig cfg = Cfg();
  auto r = Sanitize(Doc(body), TaskType::kComplianceCheck, 0.1,
                    StaticKindsConfig(cfg, {EntityKind::kOrgName}));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(IsLeakFree(r->document.body, r->HiddenSurfaces()));
}

TEST(SanitizeTest, UtilityBelowThresholdStillReturnsArtifact) {
  SanitizerConfig cfg = Cfg();
  cfg.utility_threshold_tau = 0.99;
  auto r = Sanitize(Doc("ACME Corp will pay $150,000 by March 15"),
                    TaskType::kContractReview, 0.5, cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(HasErrorKind(r->utility_status, ErrorKind::kUtilityBelowThreshold));
  EXPECT_EQ(r->document.body, "COMPANY_A will pay AMOUNT_LARGE by DATE_Q1");
}

TEST(SanitizeTest, RejectsNegativeEpsilonAndDelta) {
  EXPECT_FALSE(Sanitize(Doc("x"), TaskType::kCodeReview, -1.0, Cfg()).ok());
  SanitizerConfig cfg = Cfg();
  cfg.delta = 1e-5;
  EXPECT_FALSE(Sanitize(Doc("x"), TaskType::kCodeReview, 1.0, cfg).ok());
}

TEST(SanitizeTest, ContextCarriedAndRevealedSurfaces) {
  const std::string body = "Maria Garcia asked again on March 3 about ACCT-0098812.";
  SanitizeContext context;
  context.carried = {{"March 3", EntityKind::kDate}};
  context.revealed = {"Maria Garcia"};
  auto r = Sanitize(Doc(body), TaskType::kCustomerSupport, 0.5, Cfg(), context);
  ASSERT_TRUE(r.ok()) << r.status();
  // The carried date is hidden even though the profile preserves dates; the
  // revealed name already crossed the wire and stays as is.
  EXPECT_EQ(r->document.body.find("March 3"), std::string::npos);
  EXPECT_NE(r->document.body.find("Maria Garcia"), std::string::npos);
  EXPECT_EQ(r->document.body.find("ACCT-0098812"), std::string::npos);
}

}  // namespace
}  // namespace splitagent
