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

#include <algorithm>
#include <chrono>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "splitagent/gazetteers.h"
#include "splitagent/noise.h"
#include "splitagent/retrieval.h"
#include "splitagent/sanitizer.h"
#include "splitagent/status.h"
#include "splitagent/trace.h"

namespace splitagent {
namespace {

const std::map<TaskType, std::vector<std::string>>& Instructions() {
  static const auto* m = new std::map<TaskType, std::vector<std::string>>{
      {TaskType::kContractReview,
       {"Summarize the payment obligations.", "List the parties and their duties.",
        "Flag unusual termination terms.", "Check the notice requirements."}},
      {TaskType::kCodeReview,
       {"Review this module for security issues.", "Point out hard-coded secrets.",
        "Suggest refactoring for the client code.", "Check error handling."}},
      {TaskType::kFinancialAnalysis,
       {"Summarize the cash position.", "Compare revenue across accounts.",
        "Flag large transfers.", "Assess the quarterly margin."}},
      {TaskType::kCustomerSupport,
       {"Draft a reply to the customer.", "Classify the sentiment of the ticket.",
        "Propose a resolution for the refund.", "Summarize the open issues."}},
      {TaskType::kRiskAssessment,
       {"Rank the exposures.", "Identify owners for each risk.",
        "Summarize vendor risk.", "Suggest mitigations."}},
      {TaskType::kComplianceCheck,
       {"List the controls due for audit.", "Flag policy breaches.",
        "Summarize attestation status.", "Check credential handling."}},
  };
  return *m;
}

const char* ToolForTask(TaskType task) {
  switch (task) {
    case TaskType::kContractReview:
    case TaskType::kFinancialAnalysis:
    case TaskType::kRiskAssessment:
      return "amount_total";
    case TaskType::kCodeReview:
      return "line_count";
    case TaskType::kCustomerSupport:
    case TaskType::kComplianceCheck:
      return "entity_census";
  }
  return "word_count";
}

ScenarioScript SingleTurn(const std::string& name, const Document& doc) {
  ScenarioScript script;
  script.name = name;
  script.task = TaskForSourceClass(doc.source_class);
  script.turns.push_back({"Review the document.", 0.5, {}, doc.id});
  return script;
}

void MergeTruth(GroundTruth& into, GroundTruth from) {
  into.slots.merge(from.slots);
  into.same_source.merge(from.same_source);
}

bool HasKind(const std::vector<PlantedEntity>& planted, const std::vector<EntityKind>& kinds) {
  return std::any_of(planted.begin(), planted.end(), [&](const PlantedEntity& p) {
    return std::find(kinds.begin(), kinds.end(), p.entity.kind) != kinds.end();
  });
}

double Millis(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

double Accuracy(const SessionReport& report) {
  int completed = 0;
  double utility = 0.0;
  for (const TurnReport& t : report.turns) {
    if (!t.completed) continue;
    ++completed;
    utility += t.utility;
  }
  if (completed == 0) return 0.0;
  return report.CompletionRate() * (utility / completed);
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

BenchRow MakeBenchRow(std::string label, double epsilon, double accuracy, double privacy,
                      double latency_ms) {
  BenchRow row;
  row.label = std::move(label);
  row.epsilon = epsilon;
  row.accuracy = accuracy;
  row.privacy = privacy;
  row.product = accuracy * privacy;
  row.latency_ms = latency_ms;
  return row;
}

std::optional<double> ArgmaxProductEpsilon(const std::vector<BenchRow>& rows) {
  const BenchRow* best = nullptr;
  for (const BenchRow& row : rows) {
    if (best == nullptr || row.product > best->product) best = &row;
  }
  if (best == nullptr) return std::nullopt;
  return best->epsilon;
}

absl::StatusOr<Corpus> BenchCorpus(const HarnessOptions& options) {
  // Equal share per class, so no class goes missing in small corpora.
  Corpus corpus;
  const int n = static_cast<int>(std::size(kAllSourceClasses));
  for (int c = 0; c < n; ++c) {
    const SourceClass cls = kAllSourceClasses[c];
    GenSpec spec;
    spec.mix = {{cls, 1.0}};
    spec.count = std::max(1, (options.corpus_docs + n - 1 - c) / n);
    spec.min_bytes = options.min_bytes;
    spec.max_bytes = options.max_bytes;
    spec.seed = DeriveSeed(options.seed, absl::StrCat("bench-corpus-", SourceClassName(cls)));
    SPLITAGENT_ASSIGN_OR_RETURN(Corpus part, GenerateCorpus(spec));
    for (Document& d : part.documents) corpus.documents.push_back(std::move(d));
    corpus.annotations.by_document.merge(part.annotations.by_document);
  }
  return corpus;
}

std::vector<ScenarioScript> DefaultScripts(const Corpus& corpus, int turns) {
  std::vector<ScenarioScript> scripts;
  for (TaskType task : kAllTaskTypes) {
    std::vector<const Document*> docs;
    for (const Document& d : corpus.documents) {
      if (d.source_class == SourceClassForTask(task)) docs.push_back(&d);
    }
    if (docs.empty()) continue;
    const auto& instructions = Instructions().at(task);
    ScenarioScript script;
    script.name = absl::StrCat("default-", TaskTypeName(task));
    script.task = task;
    for (int t = 0; t < turns; ++t) {
      ScenarioTurn turn;
      turn.instruction = instructions[t % instructions.size()];
      turn.importance = (t % 5 == 4 || t >= turns - 5) ? 1.0 : 0.2;
      if (t % 3 == 2) turn.expected_tools = {ToolForTask(task)};
      turn.document_id = docs[t % docs.size()]->id;
      script.turns.push_back(std::move(turn));
    }
    scripts.push_back(std::move(script));
  }
  return scripts;
}

GroundTruth TruthForSession(const std::string& trace_name, const std::vector<ShareRecord>& shares,
                            const Corpus& corpus) {
  std::map<std::string, const Document*> docs;
  for (const Document& d : corpus.documents) docs[d.id] = &d;
  GroundTruth truth;
  for (int s = 0; s < static_cast<int>(shares.size()); ++s) {
    int offset = 0;
    for (const std::string& id : shares[s].document_ids) {
      auto doc = docs.find(id);
      if (doc == docs.end()) continue;
      auto planted = corpus.annotations.by_document.find(id);
      if (planted != corpus.annotations.by_document.end()) {
        for (const PlantedEntity& p : planted->second) {
          truth.slots[{trace_name, s, offset + p.line, p.slot}] = p.entity;
        }
      }
      // Documents in one share are joined by a blank line.
      offset += static_cast<int>(std::count(doc->second->body.begin(),
                                            doc->second->body.end(), '\n')) + 2;
    }
  }
  return truth;
}

absl::StatusOr<AttackFixture> BuildAttackFixture(std::uint64_t seed) {
  AttackFixture fixture;
  fixture.spec.mix = {{SourceClass::kContract, 1.0},
                      {SourceClass::kFinancial, 1.0},
                      {SourceClass::kSupport, 1.0}};
  fixture.spec.count = 30;
  fixture.spec.min_bytes = 1024;
  fixture.spec.max_bytes = 1536;
  fixture.spec.seed = DeriveSeed(seed, "attack-fixture");
  SPLITAGENT_ASSIGN_OR_RETURN(Corpus corpus, GenerateCorpus(fixture.spec));
  fixture.corpus = corpus;
  for (int i = 0; i < 15; ++i) fixture.target_ids.push_back(corpus.documents[i].id);
  for (int i = 0; i < 10; ++i) {
    fixture.pairs.push_back({corpus.documents[i].id, corpus.documents[i].id, true});
  }
  const std::vector<EntityKind> contact = {EntityKind::kEmail, EntityKind::kPhone,
                                           EntityKind::kAccountId};
  const std::vector<EntityKind> identity = {EntityKind::kPersonName, EntityKind::kOrgName};
  std::size_t next = 10;
  for (const auto* kinds : {&contact, &identity}) {
    int made = 0;
    for (; next < corpus.documents.size() && made < 5; ++next) {
      const Document& doc = corpus.documents[next];
      const auto& planted = corpus.annotations.by_document.at(doc.id);
      if (!HasKind(planted, *kinds)) continue;
      SPLITAGENT_ASSIGN_OR_RETURN(auto sibling,
                                  GenerateSibling(doc, planted, fixture.spec, *kinds, 1));
      fixture.pairs.push_back({doc.id, sibling.first.id, false});
      fixture.corpus.annotations.by_document[sibling.first.id] = std::move(sibling.second);
      fixture.corpus.documents.push_back(std::move(sibling.first));
      ++made;
    }
    if (made < 5) return MakeError(ErrorKind::kSpecInvalid, "fixture corpus lacks sibling sources");
  }
  return fixture;
}

absl::StatusOr<OracleFixture> BuildOracleFixture(int k, int documents, std::uint64_t seed) {
  if (k < 1 || k > static_cast<int>(std::min(PersonNames().size(), OrgNames().size()))) {
    return MakeError(ErrorKind::kSpecInvalid, "k out of range");
  }
  OracleFixture fixture;
  auto& dicts = fixture.side_info.dictionaries;
  dicts[EntityKind::kPersonName].assign(PersonNames().begin(), PersonNames().begin() + k);
  dicts[EntityKind::kOrgName].assign(OrgNames().begin(), OrgNames().begin() + k);
  fixture.side_info.templates[SourceClass::kContract] = {"{PERSON} met {ORG}."};
  Rng rng(DeriveSeed(seed, "oracle-fixture"));
  for (int i = 0; i < documents; ++i) {
    const std::string& person = dicts[EntityKind::kPersonName][UniformIndex(rng, k)];
    const std::string& org = dicts[EntityKind::kOrgName][UniformIndex(rng, k)];
    Document doc;
    doc.id = absl::StrFormat("oracle-%04d", i);
    doc.source_class = SourceClass::kContract;
    doc.body = absl::StrCat(person, " met ", org, ".");
    const std::size_t org_start = person.size() + 5;
    fixture.corpus.annotations.by_document[doc.id] = {
        {{{0, person.size()}, EntityKind::kPersonName, person, SensitivityLevel::kConfidential},
         0, 0, 0},
        {{{org_start, org_start + org.size()}, EntityKind::kOrgName, org,
          SensitivityLevel::kConfidential},
         0, 1, 0}};
    fixture.corpus.documents.push_back(std::move(doc));
  }
  return fixture;
}

absl::StatusOr<CapturedTraces> CaptureFixture(const AttackFixture& fixture,
                                              const SanitizerConfig& config, double epsilon,
                                              std::uint64_t seed) {
  const RetrievalIndex index(fixture.corpus.documents);
  CapturedTraces out;
  auto run = [&](const std::string& name, const std::string& doc_id)
      -> absl::StatusOr<SessionOutcome> {
    const Document* doc = index.Find(doc_id);
    if (doc == nullptr) return MakeError(ErrorKind::kSpecInvalid, "fixture document missing");
    PrivacyAgentOptions options;
    options.config = config;
    options.session_id = name;
    options.seed = DeriveSeed(seed, name);
    return RunWithStub(index, SingleTurn(name, *doc), AllocationStrategy::kLinear, epsilon,
                       options);
  };
  for (std::size_t i = 0; i < fixture.target_ids.size(); ++i) {
    const std::string name = absl::StrFormat("recon-%02d", i);
    SPLITAGENT_ASSIGN_OR_RETURN(SessionOutcome outcome, run(name, fixture.target_ids[i]));
    MergeTruth(out.truth, TruthForSession(name, outcome.shares, fixture.corpus));
    out.traces.emplace_back(name, std::move(outcome.trace));
  }
  for (std::size_t i = 0; i < fixture.pairs.size(); ++i) {
    const std::string left = absl::StrFormat("link-%02d-a", i);
    const std::string right = absl::StrFormat("link-%02d-b", i);
    SPLITAGENT_ASSIGN_OR_RETURN(SessionOutcome a, run(left, fixture.pairs[i].left));
    SPLITAGENT_ASSIGN_OR_RETURN(SessionOutcome b, run(right, fixture.pairs[i].right));
    out.link_traces.emplace_back(left, std::move(a.trace));
    out.link_traces.emplace_back(right, std::move(b.trace));
    out.pairs.emplace_back(left, right);
    out.truth.same_source[{left, right}] = fixture.pairs[i].same_source;
  }
  return out;
}

std::vector<NamedConfig> AttackConfigs(const SanitizerConfig& base) {
  return {{"pass-through", PassThroughConfig(base)},
          {"static-mask", StaticMaskConfig(base)},
          {"splitagent", base}};
}

absl::StatusOr<std::map<AttackType, AttackReport>> RunAttackSuite(const AttackFixture& fixture,
                                                                  const SanitizerConfig& config,
                                                                  double epsilon,
                                                                  std::uint64_t seed) {
  SPLITAGENT_ASSIGN_OR_RETURN(const CapturedTraces captured,
                              CaptureFixture(fixture, config, epsilon, seed));
  std::map<AttackType, AttackReport> reports;
  for (AttackType attack : kAllAttacks) {
    AttackSetup setup;
    setup.attack = attack;
    setup.side_info = fixture.spec.side_info;
    setup.rng_seed = DeriveSeed(seed, AttackTypeName(attack));
    if (attack == AttackType::kLinkability) {
      setup.traces = captured.link_traces;
      setup.pairs = captured.pairs;
    } else {
      setup.traces = captured.traces;
    }
    SPLITAGENT_ASSIGN_OR_RETURN(reports[attack], RunAttack(setup, captured.truth));
  }
  return reports;
}

absl::StatusOr<AttackReport> OracleReconstruction(int k, int documents, std::uint64_t seed) {
  SPLITAGENT_ASSIGN_OR_RETURN(const OracleFixture fixture, BuildOracleFixture(k, documents, seed));
  std::set<EntityKind> all(std::begin(kAllEntityKinds), std::end(kAllEntityKinds));
  const SanitizerConfig config = StaticKindsConfig(DefaultSanitizerConfig(), all);
  const RetrievalIndex index(fixture.corpus.documents);
  AttackSetup setup;
  setup.attack = AttackType::kReconstruction;
  setup.side_info = fixture.side_info;
  setup.rng_seed = DeriveSeed(seed, "oracle-attack");
  setup.config = config;
  GroundTruth truth;
  for (const Document& doc : fixture.corpus.documents) {
    PrivacyAgentOptions options;
    options.config = config;
    options.session_id = doc.id;
    options.seed = DeriveSeed(seed, doc.id);
    SPLITAGENT_ASSIGN_OR_RETURN(
        SessionOutcome outcome,
        RunWithStub(index, SingleTurn(doc.id, doc), AllocationStrategy::kLinear, 1.0, options));
    MergeTruth(truth, TruthForSession(doc.id, outcome.shares, fixture.corpus));
    setup.traces.emplace_back(doc.id, std::move(outcome.trace));
  }
  return RunAttack(setup, truth);
}

absl::StatusOr<std::vector<BenchRow>> SweepEpsilon(const std::vector<double>& grid,
                                                   const HarnessOptions& options) {
  SPLITAGENT_ASSIGN_OR_RETURN(const Corpus corpus, BenchCorpus(options));
  const RetrievalIndex index(corpus.documents);
  const auto scripts = DefaultScripts(corpus, options.script_turns);
  SPLITAGENT_ASSIGN_OR_RETURN(const AttackFixture fixture, BuildAttackFixture(options.seed));
  const SanitizerConfig base = DefaultSanitizerConfig();
  std::vector<BenchRow> rows;
  for (double epsilon : grid) {
    const auto start = std::chrono::steady_clock::now();
    double accuracy = 0.0;
    for (const ScenarioScript& script : scripts) {
      PrivacyAgentOptions agent;
      agent.session_id = script.name;
      agent.seed = DeriveSeed(options.seed, script.name);
      SPLITAGENT_ASSIGN_OR_RETURN(
          const SessionOutcome outcome,
          RunWithStub(index, script, AllocationStrategy::kLinear,
                      epsilon * static_cast<double>(script.turns.size()), agent));
      accuracy += Accuracy(outcome.report);
    }
    if (!scripts.empty()) accuracy /= static_cast<double>(scripts.size());
    SPLITAGENT_ASSIGN_OR_RETURN(const auto reports,
                                RunAttackSuite(fixture, base, epsilon, options.seed));
    double worst = 0.0;
    for (const auto& [attack, report] : reports) worst = std::max(worst, report.success_rate);
    BenchRow row = MakeBenchRow("splitagent", epsilon, accuracy, 1.0 - worst, Millis(start));
    for (const auto& [attack, report] : reports) {
      row.meta[AttackTypeName(attack)] = CsvNumber(report.success_rate);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SimTurn> StrategyScenario(int turns) {
  std::vector<SimTurn> out;
  for (int t = 0; t < turns; ++t) {
    SimTurn turn;
    turn.importance = (t % 5 == 4 || t >= turns - 5) ? 1.0 : 0.2;
    turn.needs_data = t % 4 != 3;
    out.push_back(turn);
  }
  return out;
}

double ModelTurnUtility(double importance, double epsilon, const UtilityModel& model) {
  return importance * (1.0 - std::exp(-epsilon / model.saturation));
}

absl::StatusOr<StrategyRow> SimulateStrategy(AllocationStrategy strategy,
                                             const std::vector<SimTurn>& turns,
                                             double epsilon_total, const UtilityModel& model,
                                             const BudgetOptions& budget) {
  if (turns.empty()) return MakeError(ErrorKind::kSpecInvalid, "no turns to simulate");
  if (!(model.saturation > 0.0)) {
    return MakeError(ErrorKind::kConfigInvalid, "saturation must be positive");
  }
  SPLITAGENT_ASSIGN_OR_RETURN(BudgetLedger ledger, BudgetLedger::Create(epsilon_total, budget));
  AllocationParams params;
  params.initial_budget = epsilon_total;
  params.min_chargeable = budget.min_chargeable;
  const int n = static_cast<int>(turns.size());
  StrategyRow row;
  row.strategy = strategy;
  int completed = 0;
  for (int t = 0; t < n; ++t) {
    const SimTurn& turn = turns[t];
    if (!turn.needs_data) {
      row.cumulative_utility += turn.importance;
      ++completed;
      continue;
    }
    const double eps = ledger.ClampToRemaining(
        Allocate(strategy, t, n, ledger.remaining(), turn.importance, params));
    if (eps < budget.min_chargeable) continue;
    if (!ledger.Charge(absl::StrCat("sim-", t), eps, t).ok()) continue;
    row.cumulative_utility += ModelTurnUtility(turn.importance, eps, model);
    ++completed;
  }
  row.completion_rate = static_cast<double>(completed) / n;
  row.budget_used = ledger.spent() / epsilon_total;
  row.efficiency = row.budget_used > 0.0 ? row.cumulative_utility / row.budget_used : 0.0;
  return row;
}

absl::StatusOr<std::vector<StrategyRow>> CompareStrategies(
    const std::vector<AllocationStrategy>& strategies, int turns, double epsilon_total,
    const UtilityModel& model) {
  if (turns < 1) return MakeError(ErrorKind::kSpecInvalid, "turns must be at least 1");
  const std::vector<SimTurn> scenario = StrategyScenario(turns);
  std::vector<StrategyRow> rows;
  for (AllocationStrategy strategy : strategies) {
    SPLITAGENT_ASSIGN_OR_RETURN(StrategyRow row,
                                SimulateStrategy(strategy, scenario, epsilon_total, model));
    rows.push_back(row);
  }
  return rows;
}

double RelativeImprovement(double a, double b) { return (a - b) / b; }

double SanitizerComparison::Improvement(TaskType task, const std::string& a,
                                        const std::string& b) const {
  const auto& row = mean_utility.at(task);
  return RelativeImprovement(row.at(a), row.at(b));
}

std::vector<NamedConfig> SanitizerConfigs(const SanitizerConfig& base) {
  return {{"static-regex", StaticRegexConfig(base)},
          {"static-kind", StaticKindConfig(base)},
          {"context-aware", base}};
}

absl::StatusOr<SanitizerComparison> CompareSanitizers(const std::vector<NamedConfig>& configs,
                                                      const Corpus& corpus, double epsilon) {
  SanitizerComparison out;
  for (const NamedConfig& c : configs) out.labels.push_back(c.label);
  for (TaskType task : kAllTaskTypes) {
    std::vector<const Document*> docs;
    for (const Document& d : corpus.documents) {
      if (d.source_class == SourceClassForTask(task)) docs.push_back(&d);
    }
    if (docs.empty()) continue;
    for (const NamedConfig& c : configs) {
      double sum = 0.0;
      for (const Document* d : docs) {
        SPLITAGENT_ASSIGN_OR_RETURN(const SanitizeResult r, Sanitize(*d, task, epsilon, c.config));
        sum += r.document.utility.value;
      }
      out.mean_utility[task][c.label] = sum / static_cast<double>(docs.size());
    }
  }
  return out;
}

std::string CsvNumber(double value) { return absl::StrFormat("%.3f", value); }

std::string FormatCsv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    std::vector<std::string> quoted;
    for (const std::string& f : fields) quoted.push_back(CsvField(f));
    absl::StrAppend(&out, absl::StrJoin(quoted, ","), "\n");
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

absl::Status EmitCsv(const CsvTable& table, const std::string& path) {
  return WriteFile(path, FormatCsv(table));
}

CsvTable EpsilonCsv(const std::vector<BenchRow>& rows, bool with_latency) {
  CsvTable table;
  table.header = {"config", "epsilon", "accuracy", "privacy", "product"};
  if (with_latency) table.header.push_back("latency_ms");
  std::vector<BenchRow> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.label, a.epsilon) < std::tie(b.label, b.epsilon);
  });
  for (const BenchRow& r : sorted) {
    std::vector<std::string> fields = {r.label, CsvNumber(r.epsilon), CsvNumber(r.accuracy),
                                       CsvNumber(r.privacy), CsvNumber(r.product)};
    if (with_latency) fields.push_back(CsvNumber(r.latency_ms));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable StrategyCsv(const std::vector<StrategyRow>& rows) {
  CsvTable table;
  table.header = {"strategy", "cumulative_utility", "completion_rate", "budget_used",
                  "efficiency"};
  for (const StrategyRow& r : rows) {
    table.rows.push_back({StrategyName(r.strategy), CsvNumber(r.cumulative_utility),
                          CsvNumber(r.completion_rate), CsvNumber(r.budget_used),
                          CsvNumber(r.efficiency)});
  }
  return table;
}

CsvTable SanitizerCsv(const SanitizerComparison& comparison) {
  CsvTable table;
  table.header = {"task"};
  for (const std::string& l : comparison.labels) table.header.push_back(l);
  const bool has_pair =
      std::count(comparison.labels.begin(), comparison.labels.end(), "context-aware") > 0 &&
      std::count(comparison.labels.begin(), comparison.labels.end(), "static-regex") > 0;
  if (has_pair) table.header.push_back("improvement_vs_static_regex");
  for (const auto& [task, by_label] : comparison.mean_utility) {
    std::vector<std::string> fields = {TaskTypeName(task)};
    for (const std::string& l : comparison.labels) fields.push_back(CsvNumber(by_label.at(l)));
    if (has_pair) {
      fields.push_back(CsvNumber(comparison.Improvement(task, "context-aware", "static-regex")));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

CsvTable AttackCsv(const std::map<std::string, std::map<AttackType, AttackReport>>& by_config,
                   const std::vector<std::string>& config_order) {
  CsvTable table;
  table.header = {"config", "attack", "trials", "successes", "success_rate"};
  for (const std::string& label : config_order) {
    auto it = by_config.find(label);
    if (it == by_config.end()) continue;
    for (const auto& [attack, report] : it->second) {
      table.rows.push_back({label, AttackTypeName(attack), absl::StrCat(report.trials),
                            absl::StrCat(report.successes), CsvNumber(report.success_rate)});
    }
  }
  return table;
}

absl::StatusOr<BenchOutput> RunBench(const std::vector<std::string>& suites,
                                     const HarnessOptions& options) {
  for (const std::string& s : suites) {
    if (std::find(BenchSuites().begin(), BenchSuites().end(), s) == BenchSuites().end()) {
      return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown suite '", s, "'"));
    }
  }
  auto wants = [&](const char* s) {
    return std::find(suites.begin(), suites.end(), s) != suites.end();
  };
  BenchOutput out;
  const SanitizerConfig base = DefaultSanitizerConfig();
  if (wants("epsilon")) {
    SPLITAGENT_ASSIGN_OR_RETURN(const auto rows, SweepEpsilon(DefaultEpsilonGrid(), options));
    for (const BenchRow& r : rows) {
      if (std::abs(r.product - r.accuracy * r.privacy) > 1e-9) {
        out.violations.push_back(absl::StrCat("product identity fails at epsilon ", r.epsilon));
      }
    }
    out.csv["epsilon.csv"] = FormatCsv(EpsilonCsv(rows));
  }
  if (wants("strategies")) {
    SPLITAGENT_ASSIGN_OR_RETURN(
        const auto rows,
        CompareStrategies({std::begin(kAllStrategies), std::end(kAllStrategies)}, 50, 5.0));
    for (const StrategyRow& r : rows) {
      if (r.budget_used > 1.0 + 1e-12) {
        out.violations.push_back(absl::StrCat(StrategyName(r.strategy), " overspent"));
      }
    }
    out.csv["strategies.csv"] = FormatCsv(StrategyCsv(rows));
  }
  if (wants("sanitizers")) {
    SPLITAGENT_ASSIGN_OR_RETURN(const Corpus corpus, BenchCorpus(options));
    SPLITAGENT_ASSIGN_OR_RETURN(const auto comparison,
                                CompareSanitizers(SanitizerConfigs(base), corpus, 1.0));
    out.csv["sanitizers.csv"] = FormatCsv(SanitizerCsv(comparison));
  }
  if (wants("attacks")) {
    SPLITAGENT_ASSIGN_OR_RETURN(const AttackFixture fixture, BuildAttackFixture(options.seed));
    std::map<std::string, std::map<AttackType, AttackReport>> by_config;
    std::vector<std::string> order;
    for (const NamedConfig& c : AttackConfigs(base)) {
      SPLITAGENT_ASSIGN_OR_RETURN(by_config[c.label],
                                  RunAttackSuite(fixture, c.config, 0.5, options.seed));
      order.push_back(c.label);
    }
    out.csv["attacks.csv"] = FormatCsv(AttackCsv(by_config, order));
  }
  return out;
}

}  // namespace splitagent
