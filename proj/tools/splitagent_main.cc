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

// splitagent command line: sanitizer, agents, attacks, data generation and
// the bench harness. Exit status is 0 on success, 1 on a failed operation
// and 2 when the bench finds an invariant violation.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "splitagent/adversary.h"
#include "splitagent/config.h"
#include "splitagent/datagen.h"
#include "splitagent/harness.h"
#include "splitagent/privacy_agent.h"
#include "splitagent/privacy_service.h"
#include "splitagent/reasoning.h"
#include "splitagent/records.h"
#include "splitagent/retrieval.h"
#include "splitagent/sanitizer.h"
#include "splitagent/scenario.h"
#include "splitagent/status.h"
#include "splitagent/trace.h"
#include "splitagent/transport.h"

namespace splitagent {
namespace {

namespace fs = std::filesystem;

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return 1;
}

absl::StatusOr<SanitizerConfig> LoadConfig(const std::string& path) {
  if (path.empty()) return DefaultSanitizerConfig();
  return LoadConfigFile(path);
}

absl::Status MakeDirs(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot create ", dir));
  return absl::OkStatus();
}

// ---- sanitize

struct SanitizeArgs {
  std::string task;
  double epsilon = 1.0;
  std::string in;
  std::string out;
  std::string map;
  std::string config;
};

absl::Status RunSanitize(const SanitizeArgs& a) {
  const auto task = ParseTaskType(a.task);
  if (!task) return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown task ", a.task));
  SPLITAGENT_ASSIGN_OR_RETURN(const SanitizerConfig cfg, LoadConfig(a.config));
  Document doc;
  doc.id = fs::path(a.in).stem().string();
  doc.task_hint = *task;
  doc.source_class = SourceClassForTask(*task);
  SPLITAGENT_ASSIGN_OR_RETURN(doc.body, ReadFile(a.in));
  SPLITAGENT_ASSIGN_OR_RETURN(const SanitizeResult r, Sanitize(doc, *task, a.epsilon, cfg));
  SPLITAGENT_RETURN_IF_ERROR(WriteFile(a.out, r.document.body));
  if (!a.map.empty()) SPLITAGENT_RETURN_IF_ERROR(WriteFile(a.map, FormatAbstractionMap(r.map)));
  std::cerr << absl::StrCat("epsilon_spent ", r.document.epsilon_spent, " utility ",
                            r.document.utility.value, "\n");
  if (!r.utility_status.ok()) std::cerr << "warning: " << r.utility_status << "\n";
  return absl::OkStatus();
}

// ---- agents

PrivacyService* g_service = nullptr;

void StopService(int) {
  if (g_service != nullptr) g_service->Stop();
}

struct ServePrivacyArgs {
  std::string corpus;
  std::string listen = "127.0.0.1:7401";
  std::string config;
};

absl::Status RunServePrivacy(const ServePrivacyArgs& a) {
  SPLITAGENT_ASSIGN_OR_RETURN(Corpus corpus, ReadCorpusDir(a.corpus));
  PrivacyAgentOptions options;
  SPLITAGENT_ASSIGN_OR_RETURN(options.config, LoadConfig(a.config));
  PrivacyService service(std::move(corpus), options);
  SPLITAGENT_ASSIGN_OR_RETURN(const int port, service.Bind(a.listen));
  std::cerr << "privacy service on port " << port << "\n";
  g_service = &service;
  std::signal(SIGINT, StopService);
  std::signal(SIGTERM, StopService);
  const absl::Status status = service.Serve();
  g_service = nullptr;
  return status;
}

struct ServeReasoningArgs {
  std::string listen = "127.0.0.1:7402";
  int max_sessions = 0;
  std::size_t echo_limit = 24;
};

absl::Status RunServeReasoning(const ServeReasoningArgs& a) {
  SPLITAGENT_ASSIGN_OR_RETURN(const auto listener, Listen(a.listen));
  std::cerr << "reasoning stub on port " << listener.second << "\n";
  StubOptions stub;
  stub.echo_limit = a.echo_limit;
  auto backend = MakeStubBackend(stub);
  return ServeReasoning(listener.first, *backend, a.max_sessions);
}

struct RunScenarioArgs {
  std::string script;
  std::string strategy = "linear";
  double epsilon = 1.0;
  std::string trace;
  std::string report;
  std::string corpus;
  std::string privacy;
  std::string reasoning;
  std::string session_id = "session-1";
  std::uint64_t seed = 0;
  std::string config;
};

absl::Status RunScenario(const RunScenarioArgs& a) {
  if (a.corpus.empty() == a.privacy.empty()) {
    return MakeError(ErrorKind::kSpecInvalid, "give exactly one of --corpus and --privacy");
  }
  const auto strategy = ParseStrategy(a.strategy);
  if (!strategy) {
    return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown strategy ", a.strategy));
  }
  SessionRequest request;
  SPLITAGENT_ASSIGN_OR_RETURN(request.script, ReadFile(a.script));
  request.strategy = *strategy;
  request.epsilon = a.epsilon;
  request.reasoning = a.reasoning;
  request.session_id = a.session_id;
  request.seed = a.seed;
  SessionResponse response;
  if (!a.privacy.empty()) {
    SPLITAGENT_ASSIGN_OR_RETURN(response, RequestSession(a.privacy, request));
  } else {
    SPLITAGENT_ASSIGN_OR_RETURN(const Corpus corpus, ReadCorpusDir(a.corpus));
    const RetrievalIndex index(corpus.documents);
    PrivacyAgentOptions options;
    SPLITAGENT_ASSIGN_OR_RETURN(options.config, LoadConfig(a.config));
    SPLITAGENT_ASSIGN_OR_RETURN(response, HandleSessionRequest(index, request, options));
  }
  SPLITAGENT_RETURN_IF_ERROR(WriteFile(a.trace, response.trace));
  if (a.report.empty()) {
    std::cout << response.report;
  } else {
    SPLITAGENT_RETURN_IF_ERROR(WriteFile(a.report, response.report));
  }
  return absl::OkStatus();
}

// ---- adversary

struct AttackArgs {
  std::string type;
  std::string traces;
  std::string sideinfo;
  std::string out;
  std::string truth;
  std::string config;
  std::uint64_t seed = 0;
};

absl::Status RunAttackCommand(const AttackArgs& a) {
  const auto type = ParseAttackType(a.type);
  if (!type) return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown attack ", a.type));
  AttackSetup setup;
  setup.attack = *type;
  setup.rng_seed = a.seed;
  SPLITAGENT_ASSIGN_OR_RETURN(setup.config, LoadConfig(a.config));
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string info, ReadFile(a.sideinfo));
  SPLITAGENT_ASSIGN_OR_RETURN(setup.side_info, ParseSideInfo(info));
  SPLITAGENT_ASSIGN_OR_RETURN(setup.traces, ReadTraceDir(a.traces));
  SPLITAGENT_ASSIGN_OR_RETURN(const GroundTruth truth,
                              ReadGroundTruth(a.truth.empty() ? a.traces : a.truth));
  if (*type == AttackType::kLinkability) {
    for (const auto& [pair, same] : truth.same_source) setup.pairs.push_back(pair);
  }
  SPLITAGENT_ASSIGN_OR_RETURN(const AttackReport report, RunAttack(setup, truth));
  SPLITAGENT_RETURN_IF_ERROR(WriteFile(a.out, FormatAttackReport(report)));
  std::cerr << absl::StrCat(AttackTypeName(report.attack), " success ", report.successes, "/",
                            report.trials, "\n");
  return absl::OkStatus();
}

struct CaptureArgs {
  std::string config_label = "splitagent";
  double epsilon = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

// Writes the attack fixture's traces and truth files: <out>/recon holds the
// single-document sessions, <out>/link the linkability pairs, and
// <out>/sideinfo.json the attacker's side info.
absl::Status RunCapture(const CaptureArgs& a) {
  SPLITAGENT_ASSIGN_OR_RETURN(const AttackFixture fixture, BuildAttackFixture(a.seed));
  const SanitizerConfig* config = nullptr;
  const auto configs = AttackConfigs(DefaultSanitizerConfig());
  for (const NamedConfig& c : configs) {
    if (c.label == a.config_label) config = &c.config;
  }
  if (config == nullptr) {
    return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown config ", a.config_label));
  }
  SPLITAGENT_ASSIGN_OR_RETURN(const CapturedTraces captured,
                              CaptureFixture(fixture, *config, a.epsilon, a.seed));
  const std::string recon = a.out + "/recon";
  const std::string link = a.out + "/link";
  SPLITAGENT_RETURN_IF_ERROR(MakeDirs(recon));
  SPLITAGENT_RETURN_IF_ERROR(MakeDirs(link));
  GroundTruth recon_truth;
  GroundTruth link_truth;
  recon_truth.slots = captured.truth.slots;
  link_truth.same_source = captured.truth.same_source;
  for (const auto& [name, trace] : captured.traces) {
    SPLITAGENT_RETURN_IF_ERROR(WriteTraceFile(recon + "/" + name + ".trace", trace));
  }
  for (const auto& [name, trace] : captured.link_traces) {
    SPLITAGENT_RETURN_IF_ERROR(WriteTraceFile(link + "/" + name + ".trace", trace));
  }
  SPLITAGENT_RETURN_IF_ERROR(WriteGroundTruth(recon, recon_truth));
  SPLITAGENT_RETURN_IF_ERROR(WriteGroundTruth(link, link_truth));
  return WriteFile(a.out + "/sideinfo.json", SideInfoToJson(fixture.spec.side_info));
}

// ---- datagen

struct GenDataArgs {
  std::string spec;
  std::string out;
};

absl::Status RunGenData(const GenDataArgs& a) {
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string text, ReadFile(a.spec));
  SPLITAGENT_ASSIGN_OR_RETURN(const GenSpec spec, ParseGenSpecJson(text));
  SPLITAGENT_ASSIGN_OR_RETURN(const Corpus corpus, GenerateCorpus(spec));
  SPLITAGENT_RETURN_IF_ERROR(WriteCorpusDir(corpus, a.out));
  std::cerr << corpus.documents.size() << " documents written to " << a.out << "\n";
  return absl::OkStatus();
}

// ---- bench

struct BenchArgs {
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  std::string out;
};

// Returns the exit code: 2 when an invariant failed.
absl::StatusOr<int> RunBenchCommand(const BenchArgs& a) {
  std::vector<std::string> suites = a.suites;
  if (suites.empty() || (suites.size() == 1 && suites[0] == "all")) suites = BenchSuites();
  HarnessOptions options;
  options.seed = a.seed;
  SPLITAGENT_ASSIGN_OR_RETURN(const BenchOutput out, RunBench(suites, options));
  SPLITAGENT_RETURN_IF_ERROR(MakeDirs(a.out));
  for (const auto& [name, csv] : out.csv) {
    SPLITAGENT_RETURN_IF_ERROR(WriteFile(a.out + "/" + name, csv));
  }
  for (const std::string& v : out.violations) std::cerr << "violation: " << v << "\n";
  return out.violations.empty() ? 0 : 2;
}

int Main(int argc, char** argv) {
  CLI::App app{"splitagent: split privacy/reasoning agents, attacks and benchmarks"};
  app.require_subcommand(1);

  SanitizeArgs sanitize;
  auto* sc = app.add_subcommand("sanitize", "Sanitize one document for a task");
  sc->add_option("--task", sanitize.task, "Task type, e.g. contract_review")->required();
  sc->add_option("--epsilon", sanitize.epsilon, "Privacy budget for this document")->required();
  sc->add_option("--in", sanitize.in, "Input text file")->required();
  sc->add_option("--out", sanitize.out, "Sanitized output file")->required();
  sc->add_option("--map", sanitize.map, "Abstraction map file (stays local)");
  sc->add_option("--config", sanitize.config, "Sanitizer config JSON");

  ServePrivacyArgs serve_privacy;
  auto* sp = app.add_subcommand("serve-privacy", "Serve the privacy agent over a corpus");
  sp->add_option("--corpus", serve_privacy.corpus, "Corpus directory from gen-data")->required();
  sp->add_option("--listen", serve_privacy.listen, "host:port for session requests");
  sp->add_option("--config", serve_privacy.config, "Sanitizer config JSON");

  ServeReasoningArgs serve_reasoning;
  auto* sr = app.add_subcommand("serve-reasoning-stub", "Serve the stub reasoning agent");
  sr->add_option("--listen", serve_reasoning.listen, "host:port for protocol connections");
  sr->add_option("--max-sessions", serve_reasoning.max_sessions, "Exit after N sessions (0: never)");
  sr->add_option("--echo-limit", serve_reasoning.echo_limit, "Longest verbatim echo allowed");

  RunScenarioArgs scenario;
  auto* rs = app.add_subcommand("run-scenario", "Run a scenario script as one session");
  rs->add_option("--script", scenario.script, "Scenario script file")->required();
  rs->add_option("--strategy", scenario.strategy, "naive|linear|adaptive|intelligent");
  rs->add_option("--epsilon", scenario.epsilon, "Session budget")->required();
  rs->add_option("--trace", scenario.trace, "Captured trace output")->required();
  rs->add_option("--report", scenario.report, "Session report output (default stdout)");
  rs->add_option("--corpus", scenario.corpus, "Run the privacy agent in-process on this corpus");
  rs->add_option("--privacy", scenario.privacy, "host:port of a serve-privacy instance");
  rs->add_option("--reasoning", scenario.reasoning, "host:port of a reasoning agent");
  rs->add_option("--session-id", scenario.session_id, "Session id");
  rs->add_option("--seed", scenario.seed, "Seed for noise and nonces");
  rs->add_option("--config", scenario.config, "Sanitizer config JSON (in-process only)");

  AttackArgs attack;
  auto* at = app.add_subcommand("attack", "Run an attack on captured traces");
  at->add_option("--type", attack.type, "reconstruction|inference|linkability")->required();
  at->add_option("--traces", attack.traces, "Directory of .trace files")->required();
  at->add_option("--sideinfo", attack.sideinfo, "Side info JSON")->required();
  at->add_option("--out", attack.out, "Report file")->required();
  at->add_option("--truth", attack.truth, "Directory of .truth files (default: --traces)");
  at->add_option("--config", attack.config, "Public mechanism parameters (config JSON)");
  at->add_option("--seed", attack.seed, "Attacker seed");

  CaptureArgs capture;
  auto* cp = app.add_subcommand("capture", "Capture the attack fixture traces with truth files");
  cp->add_option("--config-label", capture.config_label, "pass-through|static-mask|splitagent");
  cp->add_option("--epsilon", capture.epsilon, "Per-session budget");
  cp->add_option("--seed", capture.seed, "Master seed");
  cp->add_option("--out", capture.out, "Output directory")->required();

  GenDataArgs gen;
  auto* gd = app.add_subcommand("gen-data", "Generate a synthetic corpus");
  gd->add_option("--spec", gen.spec, "Generation spec JSON")->required();
  gd->add_option("--out", gen.out, "Corpus directory")->required();

  BenchArgs bench;
  auto* bn = app.add_subcommand("bench", "Run benchmark suites and write CSV files");
  bn->add_option("--suite", bench.suites, "epsilon|strategies|sanitizers|attacks|all")
      ->take_all();
  bn->add_option("--seed", bench.seed, "Master seed");
  bn->add_option("--out", bench.out, "Output directory")->required();

  bool print_default = false;
  auto* cf = app.add_subcommand("config", "Show configuration");
  cf->add_flag("--print-default", print_default, "Print the default sanitizer config JSON");

  CLI11_PARSE(app, argc, argv);

  absl::Status status;
  if (*sc) status = RunSanitize(sanitize);
  if (*sp) status = RunServePrivacy(serve_privacy);
  if (*sr) status = RunServeReasoning(serve_reasoning);
  if (*rs) status = RunScenario(scenario);
  if (*at) status = RunAttackCommand(attack);
  if (*cp) status = RunCapture(capture);
  if (*gd) status = RunGenData(gen);
  if (*bn) {
    auto code = RunBenchCommand(bench);
    if (!code.ok()) return Fail(code.status());
    return *code;
  }
  if (*cf) {
    if (!print_default) {
      std::cerr << "config: nothing to do (try --print-default)\n";
      return 1;
    }
    std::cout << ConfigToJson(DefaultSanitizerConfig());
    return 0;
  }
  return status.ok() ? 0 : Fail(status);
}

}  // namespace
}  // namespace splitagent

int main(int argc, char** argv) { return splitagent::Main(argc, argv); }
