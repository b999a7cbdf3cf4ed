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

#ifndef SPLITAGENT_SESSION_H_
#define SPLITAGENT_SESSION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "splitagent/protocol.h"

namespace splitagent {

enum class SessionState { kInit, kHandshake, kActive, kBudgetLow, kDepleted, kClosed };

inline constexpr SessionState kAllSessionStates[] = {
    SessionState::kInit,      SessionState::kHandshake, SessionState::kActive,
    SessionState::kBudgetLow, SessionState::kDepleted,  SessionState::kClosed,
};

const char* SessionStateName(SessionState state);

// Direction relative to the local endpoint.
enum class Direction { kSent, kReceived };

struct SessionEvent {
  enum class Kind { kMessage, kBudgetLow, kBudgetDepleted, kClose };

  Kind kind = Kind::kMessage;
  Direction direction = Direction::kSent;
  std::optional<ProtocolMessage> message;

  static SessionEvent Sent(ProtocolMessage msg);
  static SessionEvent Received(ProtocolMessage msg);
  static SessionEvent BudgetLow() { return {Kind::kBudgetLow, Direction::kSent, std::nullopt}; }
  static SessionEvent BudgetDepleted() { return {Kind::kBudgetDepleted, Direction::kSent, std::nullopt}; }
  static SessionEvent Close() { return {Kind::kClose, Direction::kSent, std::nullopt}; }
};

struct SessionAction {
  enum class Kind {
    kAccept,     // the message may be acted on
    kEmitError,  // reject; state unchanged, report ERROR to the peer
    kNotifyBudget,
    kClose,
  };

  Kind kind = Kind::kAccept;
  std::string detail;

  friend bool operator==(const SessionAction&, const SessionAction&) = default;
};

// Value-type session: the state plus what the table needs to check budget
// gating and per-direction sequence numbers.
struct Session {
  SessionState state = SessionState::kInit;
  std::string session_id;
  double budget = 0.0;  // from HELLO
  double shared = 0.0;  // sum of accepted CONTEXT_SHARE privacy_cost
  double shared_compensation = 0.0;
  std::array<std::optional<std::uint64_t>, 2> last_seq;

  friend bool operator==(const Session&, const Session&) = default;
};

struct StepResult {
  Session session;
  std::vector<SessionAction> actions;

  bool accepted() const;
};

// Pure transition function, total over every (state, event) pair:
//   INIT       --HELLO-->            HANDSHAKE
//   HANDSHAKE  --ACK-->              ACTIVE
//   ACTIVE     --data message-->     ACTIVE      (data: CONTEXT_SHARE,
//   BUDGET_LOW --data message-->     BUDGET_LOW   TOOL_*, RESPONSE,
//                                                 BUDGET_UPDATE, ERROR)
//   ACTIVE, BUDGET_LOW --budget-low--> BUDGET_LOW
//   any but CLOSED --budget-depleted--> DEPLETED
//   DEPLETED   --BUDGET_UPDATE, ERROR--> DEPLETED
//   any but CLOSED --close-->        CLOSED
// A CONTEXT_SHARE whose privacy_cost would push the shared total over the
// HELLO budget, a non-increasing seq, a foreign session id and every other
// pair yield an ERROR action with the session unchanged. ERROR messages are
// also accepted in INIT and HANDSHAKE so a peer can refuse a handshake.
StepResult Step(const Session& session, const SessionEvent& event);

}  // namespace splitagent

#endif  // SPLITAGENT_SESSION_H_
