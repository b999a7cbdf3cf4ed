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

#include "splitagent/session.h"

#include <random>
#include <string>

#include "gtest/gtest.h"

namespace splitagent {
namespace {

Payload SamplePayload(MessageType type) {
  switch (type) {
    case MessageType::kHello:
      return HelloPayload{TaskType::kContractReview, PrivacyLevel::kConfidential, 5.0};
    case MessageType::kAck: return AckPayload{{"plan"}, {}};
    case MessageType::kContextShare: return ContextSharePayload{"x", {}, 0.1, 0.9, ""};
    case MessageType::kToolRequest: return ToolRequestPayload{"r1", "word_count", "context"};
    case MessageType::kToolResult: return ToolResultPayload{"r1", {}};
    case MessageType::kBudgetUpdate: return BudgetUpdatePayload{1.0, 4.0, "ACTIVE"};
    case MessageType::kError: return ErrorPayload{"E", "m"};
    case MessageType::kResponse: return ResponsePayload{};
  }
  return ErrorPayload{};
}

Session InState(SessionState state) {
  Session s;
  s.state = state;
  s.session_id = "s1";
  s.budget = 5.0;
  return s;
}

// The transition table written out independently of the implementation.
std::optional<SessionState> ExpectedMessageTarget(SessionState state, MessageType type) {
  using S = SessionState;
  using M = MessageType;
  const bool data = type != M::kHello && type != M::kAck;
  switch (state) {
    case S::kInit:
      if (type == M::kHello) return S::kHandshake;
      if (type == M::kError) return S::kInit;
      return std::nullopt;
    case S::kHandshake:
      if (type == M::kAck) return S::kActive;
      if (type == M::kError) return S::kHandshake;
      return std::nullopt;
    case S::kActive:
    case S::kBudgetLow:
      if (data) return state;
      return std::nullopt;
    case S::kDepleted:
      if (type == M::kBudgetUpdate || type == M::kError) return S::kDepleted;
      return std::nullopt;
    case S::kClosed:
      return std::nullopt;
  }
  return std::nullopt;
}

TEST(SessionTableTest, ExhaustiveMessages) {
  for (SessionState state : kAllSessionStates) {
    for (MessageType type : kAllMessageTypes) {
      for (Direction dir : {Direction::kSent, Direction::kReceived}) {
        const Session before = InState(state);
        ProtocolMessage msg{"s1", 1, SamplePayload(type)};
        const StepResult r = Step(before, dir == Direction::kSent ? SessionEvent::Sent(msg)
                                                                  : SessionEvent::Received(msg));
        const auto expected = ExpectedMessageTarget(state, type);
        SCOPED_TRACE(std::string(SessionStateName(state)) + " " + MessageTypeName(type));
        ASSERT_FALSE(r.actions.empty());
        if (expected) {
          EXPECT_TRUE(r.accepted());
          EXPECT_EQ(r.session.state, *expected);
        } else {
          EXPECT_FALSE(r.accepted());
          EXPECT_EQ(r.session, before);
          EXPECT_EQ(r.actions.front().kind, SessionAction::Kind::kEmitError);
        }
      }
    }
  }
}

TEST(SessionTableTest, ExhaustiveBudgetAndClose) {
  for (SessionState state : kAllSessionStates) {
    const Session before = InState(state);
    const bool open = state != SessionState::kClosed;
    const bool can_low = state == SessionState::kActive || state == SessionState::kBudgetLow;

    const StepResult low = Step(before, SessionEvent::BudgetLow());
    EXPECT_EQ(low.accepted(), can_low) << SessionStateName(state);
    EXPECT_EQ(low.session.state, can_low ? SessionState::kBudgetLow : state);

    const StepResult depleted = Step(before, SessionEvent::BudgetDepleted());
    EXPECT_EQ(depleted.accepted(), open);
    EXPECT_EQ(depleted.session.state, open ? SessionState::kDepleted : state);

    const StepResult closed = Step(before, SessionEvent::Close());
    EXPECT_EQ(closed.accepted(), open);
    EXPECT_EQ(closed.session.state, SessionState::kClosed);
  }
}

TEST(SessionTest, HandshakeSequence) {
  Session s;
  StepResult r = Step(s, SessionEvent::Sent({"s1", 1, SamplePayload(MessageType::kHello)}));
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.session.state, SessionState::kHandshake);
  EXPECT_EQ(r.session.budget, 5.0);
  r = Step(r.session, SessionEvent::Received({"s1", 1, SamplePayload(MessageType::kAck)}));
  ASSERT_TRUE(r.accepted());
  EXPECT_EQ(r.session.state, SessionState::kActive);
}

TEST(SessionTest, ContextShareBeforeHandshakeIsError) {
  const StepResult r =
      Step(Session{}, SessionEvent::Sent({"s1", 1, SamplePayload(MessageType::kContextShare)}));
  EXPECT_FALSE(r.accepted());
  EXPECT_EQ(r.session.state, SessionState::kInit);
}

TEST(SessionTest, DepletedRefusesShares) {
  const StepResult d = Step(InState(SessionState::kActive), SessionEvent::BudgetDepleted());
  EXPECT_EQ(d.session.state, SessionState::kDepleted);
  const StepResult r =
      Step(d.session, SessionEvent::Sent({"s1", 2, SamplePayload(MessageType::kContextShare)}));
  EXPECT_FALSE(r.accepted());
}

TEST(SessionTest, SequenceNumbersStrictlyIncreasePerDirection) {
  Session s = InState(SessionState::kActive);
  ProtocolMessage m{"s1", 5, SamplePayload(MessageType::kResponse)};
  s = Step(s, SessionEvent::Sent(m)).session;
  EXPECT_FALSE(Step(s, SessionEvent::Sent(m)).accepted());
  m.seq = 4;
  EXPECT_FALSE(Step(s, SessionEvent::Sent(m)).accepted());
  // The other direction has its own counter.
  EXPECT_TRUE(Step(s, SessionEvent::Received(m)).accepted());
}

TEST(SessionTest, ForeignSessionIdRejected) {
  ProtocolMessage m{"other", 1, SamplePayload(MessageType::kResponse)};
  EXPECT_FALSE(Step(InState(SessionState::kActive), SessionEvent::Received(m)).accepted());
}

TEST(SessionTest, ShareOverBudgetRejected) {
  Session s = InState(SessionState::kActive);
  ProtocolMessage m{"s1", 1, ContextSharePayload{"x", {}, 4.5, 0.9, ""}};
  s = Step(s, SessionEvent::Sent(m)).session;
  m.seq = 2;
  std::get<ContextSharePayload>(m.payload).privacy_cost = 0.6;
  EXPECT_FALSE(Step(s, SessionEvent::Sent(m)).accepted());
  std::get<ContextSharePayload>(m.payload).privacy_cost = 0.5;
  EXPECT_TRUE(Step(s, SessionEvent::Sent(m)).accepted());
}

// Random event streams: whatever the state machine accepts never shares more
// than the HELLO budget and never acts on a share from DEPLETED.
TEST(SessionProperty, BudgetGatingOverRandomTraces) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 500; ++trial) {
    Session s;
    std::uint64_t seq[2] = {1, 1};
    double accepted_cost = 0.0;
    double budget = 0.0;
    for (int i = 0; i < 80; ++i) {
      const int pick = static_cast<int>(gen() % 12);
      SessionEvent ev;
      if (pick < 8) {
        const auto type = static_cast<MessageType>(pick);
        Payload p = SamplePayload(type);
        if (auto* share = std::get_if<ContextSharePayload>(&p)) {
          share->privacy_cost = std::uniform_real_distribution<double>(0.0, 1.5)(gen);
        }
        const int dir = static_cast<int>(gen() % 2);
        ProtocolMessage m{"s1", seq[dir]++, p};
        ev = dir == 0 ? SessionEvent::Sent(m) : SessionEvent::Received(m);
      } else if (pick == 8 || pick == 9) {
        ev = SessionEvent::BudgetLow();
      } else if (pick == 10) {
        ev = SessionEvent::BudgetDepleted();
      } else {
        continue;  // keep sessions open
      }
      const SessionState before = s.state;
      const StepResult r = Step(s, ev);
      if (r.accepted() && ev.message) {
        if (ev.message->type() == MessageType::kHello) {
          budget = std::get<HelloPayload>(ev.message->payload).budget;
        }
        if (ev.message->type() == MessageType::kContextShare) {
          ASSERT_NE(before, SessionState::kDepleted);
          accepted_cost += std::get<ContextSharePayload>(ev.message->payload).privacy_cost;
        }
      }
      s = r.session;
      ASSERT_LE(accepted_cost, budget + 1e-12);
    }
  }
}

}  // namespace
}  // namespace splitagent
