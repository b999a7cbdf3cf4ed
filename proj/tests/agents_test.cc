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

#include <sstream>
#include <thread>

#include <unistd.h>

#include "gtest/gtest.h"
#include "splitagent/privacy_agent.h"
#include "splitagent/reasoning.h"
#include "splitagent/retrieval.h"
#include "splitagent/status.h"
#include "splitagent/tool_proof.h"
#include "splitagent/tools.h"
#include "splitagent/transport.h"

namespace splitagent {
namespace {

Document Doc(std::string id, std::string body, SourceClass source = SourceClass::kContract) {
  return Document{std::move(id), std::nullopt, std::move(body), source};
}

std::vector<Document> ThreeDocs() {
  return {Doc("d1", "payment schedule payment terms"), Doc("d2", "delivery schedule"),
          Doc("d3", "the payment is late")};
}

TEST(RetrievalTest, PaymentScheduleGolden) {
  RetrievalIndex index(ThreeDocs());
  const auto hits = index.Search("payment schedule", 3);
  // Hand cosine: q = {payment, schedule}.
  // d1 3/sqrt(2*6), d2 1/sqrt(2*2), d3 1/sqrt(2*4).
  ASSERT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0].document_id, "d1");
  EXPECT_NEAR(hits[0].score, 0.8660254037844386, 1e-12);
  EXPECT_EQ(hits[1].document_id, "d2");
  EXPECT_NEAR(hits[1].score, 0.5, 1e-12);
  EXPECT_EQ(hits[2].document_id, "d3");
  EXPECT_NEAR(hits[2].score, 0.3535533905932738, 1e-12);
}

TEST(RetrievalTest, FullBodyRanksItselfFirst) {
  RetrievalIndex index(ThreeDocs());
  EXPECT_EQ(index.Search("the payment is late", 1).at(0).document_id, "d3");
}

TEST(RetrievalTest, NoHitsAndTies) {
  RetrievalIndex index(ThreeDocs());
  EXPECT_TRUE(index.Search("zebra", 3).empty());
  EXPECT_TRUE(index.Search("", 3).empty());
  RetrievalIndex twins({Doc("b", "same words"), Doc("a", "same words")});
  const auto hits = twins.Search("same", 2);
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].document_id, "a");
}

TEST(ToolsTest, WordCountMatchesIndependentCount) {
  ToolRegistry tools = DefaultToolRegistry(DefaultSanitizerConfig(), 1);
  const std::string input = "alpha beta  gamma\ndelta epsilon zeta eta";
  std::istringstream in(input);
  int oracle = 0;
  for (std::string w; in >> w;) ++oracle;
  auto exec = tools.Execute("word_count", input);
  ASSERT_TRUE(exec.ok());
  EXPECT_EQ(exec->result.output, "words=" + std::to_string(oracle));
  EXPECT_TRUE(ReplayVerify(exec->proof, input, exec->result.output));
}

TEST(ToolsTest, UnknownTool) {
  ToolRegistry tools = DefaultToolRegistry(DefaultSanitizerConfig(), 1);
  EXPECT_TRUE(HasErrorKind(tools.Execute("rm_rf", "x").status(), ErrorKind::kUnknownTool));
}

TEST(ToolsTest, FreshNoncesSameOutput) {
  ToolRegistry tools = DefaultToolRegistry(DefaultSanitizerConfig(), 1);
  auto a = tools.Execute("line_count", "a\nb\n");
  auto b = tools.Execute("line_count", "a\nb\n");
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->result.output, "lines=2");
  EXPECT_EQ(a->result.output, b->result.output);
  EXPECT_NE(a->proof.nonce, b->proof.nonce);
  EXPECT_TRUE(ReplayVerify(a->proof, "a\nb\n", a->result.output));
  EXPECT_TRUE(ReplayVerify(b->proof, "a\nb\n", b->result.output));
}

TEST(ToolsTest, AmountTotalSharesOnlyBucket) {
  ToolRegistry tools = DefaultToolRegistry(DefaultSanitizerConfig(), 1);
  auto exec = tools.Execute("amount_total", "pay $40,000 and $75,000");
  ASSERT_TRUE(exec.ok());
  EXPECT_EQ(exec->result.output, "total=115000.00");
  EXPECT_EQ(exec->result.abstract, "AMOUNT_LARGE");
}

TEST(StubBackendTest, OneStepPerTokenClass) {
  auto stub = MakeStubBackend();
  auto reply = stub->Respond({"COMPANY_A will pay AMOUNT_LARGE to COMPANY_B", {}, "", {}});
  ASSERT_TRUE(reply.ok());
  ASSERT_EQ(reply->response.plan.size(), 2u);
  EXPECT_NE(reply->response.plan[0].find("COMPANY_A"), std::string::npos);
  EXPECT_NE(reply->response.plan[1].find("AMOUNT_LARGE"), std::string::npos);
}

TEST(StubBackendTest, EmptyBody) {
  auto reply = MakeStubBackend()->Respond({"", {}, "", {}});
  ASSERT_TRUE(reply.ok());
  EXPECT_TRUE(reply->response.plan.empty());
  EXPECT_TRUE(reply->response.findings.empty());
}

TEST(StubBackendTest, GoldenResponse) {
  const ReasoningRequest request{
      "PERSON_A emailed EMAIL_A about the refund. PERSON_A called PHONE_A twice.",
      {"PERSON_A", "EMAIL_A", "PHONE_A"},
      "Summarise the complaint",
      {{"word_count", "words=11"}}};
  auto reply = MakeStubBackend()->Respond(request);
  ASSERT_TRUE(reply.ok());
  const ResponsePayload golden{
      {"Step 1: review PERSON references PERSON_A", "Step 2: review EMAIL references EMAIL_A",
       "Step 3: review PHONE references PHONE_A"},
      {"PERSON_A x2", "EMAIL_A x1", "PHONE_A x1"},
      {"Use word_count result words=11", "Resolve tokens on the private side before acting"}};
  EXPECT_EQ(reply->response, golden);
  EXPECT_LE(LongestEcho(reply->response, request.sanitized_text), StubOptions{}.echo_limit);
}

TEST(StubBackendTest, ToolHints) {
  auto reply = MakeStubBackend()->Respond({"x", {}, "check [tools: word_count, amount_total]", {}});
  ASSERT_TRUE(reply.ok());
  EXPECT_EQ(reply->tool_ids, (std::vector<std::string>{"word_count", "amount_total"}));
}

const char* kContract =
    "Master Services Agreement\n"
    "Section 1. Payment\n"
    "ACME Corp will pay Globex Holdings $150,000 by March 15, 2024.\n"
    "Contact Alice Chen at alice.chen@acme.example or 555-201-7788.\n"
    "Section 2. Term\n"
    "The agreement renews on June 1, 2025 with a 3% fee increase.\n";

const char* kTicket =
    "Ticket from Bob Martinez, account CUST-482910.\n"
    "Customer is frustrated: refund of $89.99 was not received.\n"
    "Reach him at bob.m@mail.example, 555-310-2299, 12 Oak Street.\n";

RetrievalIndex Corpus() {
  return RetrievalIndex({Doc("contract-1", kContract),
                         Doc("ticket-1", kTicket, SourceClass::kSupport)});
}

ScenarioScript OneTurn(TaskType task, std::string doc) {
  return {"one", task, {{"Review the payment clause", 0.5, {}, std::move(doc)}}};
}

TEST(PrivacyAgentTest, SingleTurnLinearUsesWholeBudget) {
  auto out = RunWithStub(Corpus(), OneTurn(TaskType::kContractReview, "contract-1"),
                         AllocationStrategy::kLinear, 5.0);
  ASSERT_TRUE(out.ok()) << out.status();
  const auto shares = out->trace.Shares();
  ASSERT_EQ(shares.size(), 1u);
  // Linear over one turn allocates 5.0; the DP task charges all of it.
  EXPECT_EQ(shares[0].privacy_cost, 5.0);
  EXPECT_EQ(out->report.turns.at(0).epsilon_allocated, 5.0);
  EXPECT_TRUE(out->report.turns[0].completed);
}

TEST(PrivacyAgentTest, TinyBudgetDepletesBeforeAnyShare) {
  ScenarioScript script{"three", TaskType::kContractReview, {}};
  for (int i = 0; i < 3; ++i) script.turns.push_back({"Review payment", 0.5, {}, "contract-1"});
  auto out = RunWithStub(Corpus(), script, AllocationStrategy::kAdaptive, 0.005);
  ASSERT_TRUE(out.ok()) << out.status();
  EXPECT_TRUE(out->trace.Shares().empty());
  EXPECT_EQ(out->report.CompletionRate(), 0.0);
  EXPECT_EQ(out->report.turns.size(), 3u);
  for (const auto& t : out->report.turns) EXPECT_EQ(t.budget_state, BudgetState::kDepleted);
}

ScenarioScript SupportFifty() {
  ScenarioScript script{"support-50", TaskType::kCustomerSupport, {}};
  for (int i = 0; i < 50; ++i) {
    ScenarioTurn turn{"Summarise the refund ticket", i >= 45 ? 1.0 : 0.3, {}, "ticket-1"};
    if (i % 10 == 0) turn.expected_tools = {"word_count", "entity_census"};
    script.turns.push_back(turn);
  }
  return script;
}

TEST(PrivacyAgentTest, FiftyTurnSupportStaysWithinBudget) {
  for (AllocationStrategy strategy : kAllStrategies) {
    auto out = RunWithStub(Corpus(), SupportFifty(), strategy, 5.0);
    ASSERT_TRUE(out.ok()) << out.status();
    ASSERT_EQ(out->report.turns.size(), 50u);
    EXPECT_LE(out->report.EpsilonSpent(), 5.0 + 1e-12) << StrategyName(strategy);
  }
}

std::string TraceText(const SessionOutcome& out) { return *FormatTrace(out.trace); }

TEST(PrivacyAgentTest, BoundaryPropertyAcrossTurns) {
  // Rising importance walks epsilon across thresholds within one session.
  ScenarioScript script{"mixed", TaskType::kCustomerSupport, {}};
  for (int i = 0; i < 12; ++i) {
    script.turns.push_back({"Summarise the refund ticket for Bob Martinez", i / 11.0,
                            {"word_count"}, i % 2 ? "ticket-1" : "contract-1"});
  }
  for (AllocationStrategy strategy : kAllStrategies) {
    for (double total : {0.3, 5.0, 40.0}) {
      auto out = RunWithStub(Corpus(), script, strategy, total);
      ASSERT_TRUE(out.ok()) << out.status();
      const std::string wire = TraceText(*out);
      for (const auto& share : out->shares) {
        for (const auto& result : share.results) {
          for (const std::string& surface : result.HiddenSurfaces()) {
            EXPECT_EQ(wire.find(surface), std::string::npos)
                << surface << " leaked, strategy " << StrategyName(strategy) << " total "
                << total;
          }
        }
      }
    }
  }
}

TEST(PrivacyAgentTest, ToolRequestsAnsweredWithVerifyingProofs) {
  auto out = RunWithStub(Corpus(), SupportFifty(), AllocationStrategy::kLinear, 5.0);
  ASSERT_TRUE(out.ok());
  std::map<std::string, const ToolRequestPayload*> open;
  int answered = 0;
  for (const TraceRecord& r : out->trace.records) {
    if (const auto* req = std::get_if<ToolRequestPayload>(&r.message.payload)) {
      open[req->request_id] = req;
    } else if (const auto* res = std::get_if<ToolResultPayload>(&r.message.payload)) {
      ASSERT_TRUE(open.count(res->request_id));
      EXPECT_TRUE(VerifyToolProof(res->proof, res->proof.output_commitment));
      open.erase(res->request_id);
      ++answered;
    }
  }
  EXPECT_TRUE(open.empty());
  EXPECT_EQ(answered, 10);
}

TEST(PrivacyAgentTest, UnknownToolAnsweredWithError) {
  ScenarioScript script{"bad-tool", TaskType::kCustomerSupport,
                        {{"Check it", 0.5, {"teleport"}, "ticket-1"}}};
  auto out = RunWithStub(Corpus(), script, AllocationStrategy::kLinear, 1.0);
  ASSERT_TRUE(out.ok()) << out.status();
  bool saw_error = false;
  for (const TraceRecord& r : out->trace.records) {
    if (const auto* e = std::get_if<ErrorPayload>(&r.message.payload)) {
      saw_error = e->code == "UnknownTool";
    }
  }
  EXPECT_TRUE(saw_error);
  EXPECT_FALSE(out->report.turns[0].completed);
}

TEST(PrivacyAgentProperty, CompletionMonotoneInBudget) {
  for (AllocationStrategy strategy : kAllStrategies) {
    double last = -1.0;
    for (double total : {0.005, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      auto out = RunWithStub(Corpus(), SupportFifty(), strategy, total);
      ASSERT_TRUE(out.ok()) << out.status();
      EXPECT_GE(out->report.CompletionRate(), last) << StrategyName(strategy) << " " << total;
      last = out->report.CompletionRate();
    }
  }
}

TEST(PrivacyAgentTest, ReportRoundTrip) {
  auto out = RunWithStub(Corpus(), SupportFifty(), AllocationStrategy::kIntelligent, 5.0);
  ASSERT_TRUE(out.ok());
  auto back = ParseReport(FormatReport(out->report));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, out->report);
}

TEST(ScenarioTest, ScriptRoundTripAndErrors) {
  const ScenarioScript script = SupportFifty();
  auto back = ParseScript(FormatScript(script));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->turns, script.turns);
  EXPECT_TRUE(HasErrorKind(ParseScript("# task customer_support\n").status(),
                           ErrorKind::kSpecInvalid));
  EXPECT_TRUE(HasErrorKind(ParseScript("0.5\t-\t-\tx\n").status(), ErrorKind::kSpecInvalid));
  EXPECT_TRUE(HasErrorKind(ParseScript("# task customer_support\n1.5\t-\t-\tx\n").status(),
                           ErrorKind::kSpecInvalid));
}

TEST(TransportTest, TcpMatchesLoopback) {
  auto listener = Listen("127.0.0.1:0");
  ASSERT_TRUE(listener.ok()) << listener.status();
  auto backend = MakeStubBackend();
  std::thread server([&] { ServeReasoning(listener->first, *backend, 1).IgnoreError(); });
  auto tcp = TcpTransport::Connect("127.0.0.1:" + std::to_string(listener->second));
  ASSERT_TRUE(tcp.ok()) << tcp.status();
  auto over_tcp =
      RunPrivacyAgent(Corpus(), SupportFifty(), AllocationStrategy::kAdaptive, 5.0, **tcp);
  tcp->reset();
  server.join();
  ::close(listener->first);
  ASSERT_TRUE(over_tcp.ok()) << over_tcp.status();
  auto loopback = RunWithStub(Corpus(), SupportFifty(), AllocationStrategy::kAdaptive, 5.0);
  ASSERT_TRUE(loopback.ok());
  EXPECT_EQ(over_tcp->trace, loopback->trace);
}

TEST(TransportTest, ConnectFailureIsPeerUnavailable) {
  auto listener = Listen("127.0.0.1:0");
  ASSERT_TRUE(listener.ok());
  const int port = listener->second;
  ::close(listener->first);
  auto tcp = TcpTransport::Connect("127.0.0.1:" + std::to_string(port));
  EXPECT_TRUE(HasErrorKind(tcp.status(), ErrorKind::kPeerUnavailable));
}

}  // namespace
}  // namespace splitagent
