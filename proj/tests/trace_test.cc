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

#include "splitagent/trace.h"

#include <filesystem>

#include "gtest/gtest.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

Trace Sample() {
  Trace t;
  t.meta = {{"session", "s1"}, {"task", "contract_review"}};
  t.records.push_back(
      {0, WireDirection::kPrivacyToReasoning,
       {"s1", 1, HelloPayload{TaskType::kContractReview, PrivacyLevel::kConfidential, 5.0}}});
  t.records.push_back({1, WireDirection::kReasoningToPrivacy, {"s1", 1, AckPayload{{"plan"}, {}}}});
  t.records.push_back({2, WireDirection::kPrivacyToReasoning,
                       {"s1", 2, ContextSharePayload{"line1\nCOMPANY_A\tx", {"COMPANY_A"}, 0.5,
                                                     0.8, "review"}}});
  return t;
}

TEST(TraceTest, RoundTrip) {
  auto text = FormatTrace(Sample());
  ASSERT_TRUE(text.ok());
  EXPECT_EQ(text->rfind("# format splitagent-trace-1\n", 0), 0u);
  auto back = ParseTrace(*text);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, Sample());
  ASSERT_EQ(back->Shares().size(), 1u);
  EXPECT_EQ(back->Shares()[0].privacy_cost, 0.5);
}

TEST(TraceTest, MalformedLines) {
  EXPECT_TRUE(HasErrorKind(ParseTrace("0\tP2R\n").status(), ErrorKind::kSchemaViolation));
  EXPECT_TRUE(HasErrorKind(ParseTrace("x\tP2R\t{}\n").status(), ErrorKind::kSchemaViolation));
  EXPECT_TRUE(HasErrorKind(ParseTrace("0\tUP\t{}\n").status(), ErrorKind::kSchemaViolation));
}

TEST(TraceTest, DirectoryRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "splitagent_trace_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ASSERT_TRUE(WriteTraceFile((dir / "b.trace").string(), Sample()).ok());
  ASSERT_TRUE(WriteTraceFile((dir / "a.trace").string(), Sample()).ok());
  ASSERT_TRUE(WriteFile((dir / "notes.txt").string(), "ignored").ok());
  auto traces = ReadTraceDir(dir.string());
  ASSERT_TRUE(traces.ok());
  ASSERT_EQ(traces->size(), 2u);
  EXPECT_EQ((*traces)[0].first, "a");
  EXPECT_EQ((*traces)[1].second, Sample());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace splitagent
