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

#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace splitagent {
namespace {

StepResult Reject(const Session& s, std::string why) {
  return {s, {{SessionAction::Kind::kEmitError, std::move(why)}}};
}

StepResult Accept(Session s, std::string detail = "") {
  return {std::move(s), {{SessionAction::Kind::kAccept, std::move(detail)}}};
}

bool IsDataMessage(MessageType type) {
  switch (type) {
    case MessageType::kContextShare:
    case MessageType::kToolRequest:
    case MessageType::kToolResult:
    case MessageType::kResponse:
    case MessageType::kBudgetUpdate:
    case MessageType::kError:
      return true;
    case MessageType::kHello:
    case MessageType::kAck:
      return false;
  }
  return false;
}

StepResult StepMessage(const Session& s, Direction direction, const ProtocolMessage& msg) {
  const MessageType type = msg.type();
  const char* type_name = MessageTypeName(type);
  if (s.state == SessionState::kClosed) {
    return Reject(s, absl::StrCat(type_name, " after close"));
  }
  const int dir = direction == Direction::kSent ? 0 : 1;
  if (s.last_seq[dir].has_value() && msg.seq <= *s.last_seq[dir]) {
    return Reject(s, absl::StrCat("seq ", msg.seq, " does not exceed ", *s.last_seq[dir]));
  }
  if (s.state != SessionState::kInit && msg.session_id != s.session_id) {
    return Reject(s, absl::StrCat("foreign session id '", msg.session_id, "'"));
  }

  Session next = s;
  next.last_seq[dir] = msg.seq;
  switch (s.state) {
    case SessionState::kInit:
      if (type == MessageType::kHello) {
        next.state = SessionState::kHandshake;
        next.session_id = msg.session_id;
        next.budget = std::get<HelloPayload>(msg.payload).budget;
        return Accept(std::move(next));
      }
      if (type == MessageType::kError) return Accept(std::move(next));
      break;
    case SessionState::kHandshake:
      if (type == MessageType::kAck) {
        next.state = SessionState::kActive;
        return Accept(std::move(next));
      }
      if (type == MessageType::kError) return Accept(std::move(next));
      break;
    case SessionState::kActive:
    case SessionState::kBudgetLow:
      if (type == MessageType::kContextShare) {
        const double cost = std::get<ContextSharePayload>(msg.payload).privacy_cost;
        // Compensated running total, matching the ledger's arithmetic.
        const double sum = next.shared + cost;
        const double err = std::abs(next.shared) >= std::abs(cost)
                               ? (next.shared - sum) + cost
                               : (cost - sum) + next.shared;
        if (sum + (next.shared_compensation + err) > next.budget) {
          return Reject(s, absl::StrFormat("privacy_cost %.17g exceeds remaining %.17g",
                                           cost, s.budget - s.shared));
        }
        next.shared = sum;
        next.shared_compensation += err;
        return Accept(std::move(next));
      }
      if (IsDataMessage(type)) return Accept(std::move(next));
      break;
    case SessionState::kDepleted:
      if (type == MessageType::kBudgetUpdate || type == MessageType::kError) {
        return Accept(std::move(next));
      }
      break;
    case SessionState::kClosed:
      break;
  }
  return Reject(s, absl::StrCat(type_name, " not allowed in ", SessionStateName(s.state)));
}

}  // namespace

const char* SessionStateName(SessionState state) {
  switch (state) {
    case SessionState::kInit: return "INIT";
    case SessionState::kHandshake: return "HANDSHAKE";
    case SessionState::kActive: return "ACTIVE";
    case SessionState::kBudgetLow: return "BUDGET_LOW";
    case SessionState::kDepleted: return "DEPLETED";
    case SessionState::kClosed: return "CLOSED";
  }
  return "?";
}

SessionEvent SessionEvent::Sent(ProtocolMessage msg) {
  return {Kind::kMessage, Direction::kSent, std::move(msg)};
}

SessionEvent SessionEvent::Received(ProtocolMessage msg) {
  return {Kind::kMessage, Direction::kReceived, std::move(msg)};
}

bool StepResult::accepted() const {
  for (const SessionAction& a : actions) {
    if (a.kind == SessionAction::Kind::kEmitError) return false;
  }
  return true;
}

StepResult Step(const Session& session, const SessionEvent& event) {
  switch (event.kind) {
    case SessionEvent::Kind::kMessage:
      if (!event.message.has_value()) return Reject(session, "message event without message");
      return StepMessage(session, event.direction, *event.message);
    case SessionEvent::Kind::kBudgetLow:
      if (session.state == SessionState::kActive ||
          session.state == SessionState::kBudgetLow) {
        Session next = session;
        next.state = SessionState::kBudgetLow;
        return {next, {{SessionAction::Kind::kNotifyBudget, "BUDGET_LOW"}}};
      }
      return Reject(session,
                    absl::StrCat("budget-low in ", SessionStateName(session.state)));
    case SessionEvent::Kind::kBudgetDepleted:
      if (session.state == SessionState::kClosed) {
        return Reject(session, "budget-depleted after close");
      }
      {
        Session next = session;
        next.state = SessionState::kDepleted;
        return {next, {{SessionAction::Kind::kNotifyBudget, "DEPLETED"}}};
      }
    case SessionEvent::Kind::kClose:
      if (session.state == SessionState::kClosed) return Reject(session, "already closed");
      {
        Session next = session;
        next.state = SessionState::kClosed;
        return {next, {{SessionAction::Kind::kClose, ""}}};
      }
  }
  return Reject(session, "unknown event");
}

}  // namespace splitagent
