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

#include "splitagent/protocol.h"

#include <random>
#include <string>

#include "gtest/gtest.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

ProtocolMessage Hello() {
  return {"s1", 1, HelloPayload{TaskType::kContractReview, PrivacyLevel::kConfidential, 5.0}};
}

std::string Frame(absl::string_view body) {
  std::string out(4, '\0');
  const std::size_t n = body.size();
  out[0] = static_cast<char>((n >> 24) & 0xFF);
  out[1] = static_cast<char>((n >> 16) & 0xFF);
  out[2] = static_cast<char>((n >> 8) & 0xFF);
  out[3] = static_cast<char>(n & 0xFF);
  return out + std::string(body);
}

TEST(ProtocolTest, HelloGoldenBytes) {
  const std::string body =
      R"({"payload":{"budget":5.0,"privacy_level":"confidential","task_type":"contract_review"},)"
      R"("seq":1,"session_id":"s1","type":"HELLO"})";
  auto frame = Encode(Hello());
  ASSERT_TRUE(frame.ok()) << frame.status();
  EXPECT_EQ(*frame, Frame(body));
  auto decoded = Decode(*frame);
  ASSERT_TRUE(decoded.ok());
  const auto& hello = std::get<HelloPayload>(decoded->payload);
  EXPECT_EQ(hello.task_type, TaskType::kContractReview);
  EXPECT_EQ(hello.privacy_level, PrivacyLevel::kConfidential);
  EXPECT_EQ(hello.budget, 5.0);
}

TEST(ProtocolTest, EncodeIsDeterministic) {
  EXPECT_EQ(*Encode(Hello()), *Encode(Hello()));
}

TEST(ProtocolTest, ContextShareFixtureCarriesPrivacyCost) {
  const std::string body =
      R"({"payload":{"abstraction_vocab":["COMPANY_A","AMOUNT_LARGE"],"instruction":"review",)"
      R"("privacy_cost":0.5,"sanitized_data":"COMPANY_A will pay AMOUNT_LARGE",)"
      R"("utility_preserved":0.75},"seq":3,"session_id":"s1","type":"CONTEXT_SHARE"})";
  auto msg = Decode(Frame(body));
  ASSERT_TRUE(msg.ok()) << msg.status();
  const auto& share = std::get<ContextSharePayload>(msg->payload);
  EXPECT_EQ(share.privacy_cost, 0.5);
  EXPECT_EQ(share.sanitized_data, "COMPANY_A will pay AMOUNT_LARGE");
  EXPECT_EQ(*Encode(*msg), Frame(body));
}

TEST(ProtocolTest, TruncatedFrames) {
  const std::string frame = *Encode(Hello());
  EXPECT_TRUE(HasErrorKind(Decode(frame.substr(0, 2)).status(), ErrorKind::kFrameTruncated));
  EXPECT_TRUE(HasErrorKind(Decode(frame.substr(0, frame.size() - 1)).status(),
                           ErrorKind::kFrameTruncated));
  EXPECT_TRUE(HasErrorKind(Decode(frame + "x").status(), ErrorKind::kSchemaViolation));
}

TEST(ProtocolTest, OversizeFrame) {
  const std::string frame = *Encode(Hello());
  EXPECT_TRUE(HasErrorKind(Decode(frame, 16).status(), ErrorKind::kOversizeFrame));
  EXPECT_TRUE(HasErrorKind(CompleteFrameLength(frame, 16).status(), ErrorKind::kOversizeFrame));
}

TEST(ProtocolTest, SchemaViolations) {
  const char* bodies[] = {
      R"({"payload":{},"seq":1,"session_id":"s1","type":"PING"})",
      R"({"payload":{"budget":5,"privacy_level":"confidential","task_type":"contract_review"},"seq":1,"session_id":"s1","type":"HELLO"})",
      R"({"payload":{"budget":5.0,"privacy_level":"confidential","task_type":"contract_review","x":1},"seq":1,"session_id":"s1","type":"HELLO"})",
      R"({"payload":{"budget":5.0,"privacy_level":"secret","task_type":"contract_review"},"seq":1,"session_id":"s1","type":"HELLO"})",
      R"({"seq":1,"session_id":"s1","type":"HELLO","payload":{"budget":5.0,"privacy_level":"confidential","task_type":"contract_review"}})",
      R"(not json)",
  };
  for (const char* body : bodies) {
    EXPECT_TRUE(HasErrorKind(Decode(Frame(body)).status(), ErrorKind::kSchemaViolation)) << body;
  }
}

TEST(ProtocolTest, InvalidPayloadsRejectedOnEncode) {
  ProtocolMessage msg = Hello();
  std::get<HelloPayload>(msg.payload).budget = 0.0;
  EXPECT_TRUE(HasErrorKind(Encode(msg).status(), ErrorKind::kPayloadInvalid));
  ProtocolMessage share{"s1", 2, ContextSharePayload{"x", {}, -0.1, 0.5, ""}};
  EXPECT_TRUE(HasErrorKind(Encode(share).status(), ErrorKind::kPayloadInvalid));
  ProtocolMessage ack{"s1", 2, AckPayload{}};
  EXPECT_TRUE(HasErrorKind(Encode(ack).status(), ErrorKind::kPayloadInvalid));
}

TEST(ProtocolTest, CompleteFrameLengthStreams) {
  const std::string a = *Encode(Hello());
  const std::string both = a + a;
  EXPECT_EQ(*CompleteFrameLength(both.substr(0, 3)), 0u);
  EXPECT_EQ(*CompleteFrameLength(both.substr(0, a.size() - 1)), 0u);
  EXPECT_EQ(*CompleteFrameLength(both), a.size());
}

std::string RandomText(std::mt19937_64& gen) {
  static const std::string alphabet = "abcXYZ_ 019\"\\\n\t{}é€";
  std::string s;
  const int n = static_cast<int>(gen() % 12);
  for (int i = 0; i < n; ++i) s += alphabet[gen() % alphabet.size()];
  // Keep multi-byte characters whole: fall back to ASCII when a cut split one.
  return IsValidUtf8(s) ? s : "plain";
}

double RandomReal(std::mt19937_64& gen) {
  return std::uniform_real_distribution<double>(0.001, 1.0)(gen);
}

std::vector<std::string> RandomList(std::mt19937_64& gen) {
  std::vector<std::string> v(gen() % 4);
  for (auto& s : v) s = RandomText(gen);
  return v;
}

std::vector<std::string> RandomLabels(std::mt19937_64& gen) {
  static const char* labels[] = {"COMPANY_A", "AMOUNT_LARGE", "DATE_Q3", "PERSON_AB"};
  std::vector<std::string> v(gen() % 4);
  for (auto& s : v) s = labels[gen() % 4];
  return v;
}

Payload RandomPayload(std::mt19937_64& gen) {
  switch (gen() % 8) {
    case 0:
      return HelloPayload{static_cast<TaskType>(gen() % 6), static_cast<PrivacyLevel>(gen() % 4),
                          RandomReal(gen) * 10};
    case 1:
      return AckPayload{{"plan", RandomText(gen)}, RandomLabels(gen)};
    case 2:
      return ContextSharePayload{RandomText(gen), RandomLabels(gen), RandomReal(gen),
                                 RandomReal(gen), RandomText(gen)};
    case 3:
      return ToolRequestPayload{"req-1", "word_count", "context"};
    case 4:
      return ToolResultPayload{"req-1", {"word_count", "ab", "cd", RandomText(gen), "n", "ef"}};
    case 5:
      return BudgetUpdatePayload{RandomReal(gen), RandomReal(gen), "ACTIVE"};
    case 6:
      return ErrorPayload{"ProtocolViolation", RandomText(gen)};
    default:
      return ResponsePayload{RandomList(gen), RandomList(gen), RandomList(gen)};
  }
}

TEST(ProtocolProperty, RoundTrip) {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 2000; ++i) {
    ProtocolMessage msg{"s-" + std::to_string(i % 7), gen() % 1000 + 1, RandomPayload(gen)};
    auto frame = Encode(msg);
    ASSERT_TRUE(frame.ok()) << frame.status();
    auto back = Decode(*frame);
    ASSERT_TRUE(back.ok()) << back.status();
    ASSERT_EQ(*back, msg);
    ASSERT_EQ(*Encode(*back), *frame);
  }
}

TEST(ProtocolTest, MessageTypeNames) {
  for (MessageType t : kAllMessageTypes) EXPECT_EQ(ParseMessageType(MessageTypeName(t)), t);
  EXPECT_FALSE(ParseMessageType("PING").has_value());
}

}  // namespace
}  // namespace splitagent
