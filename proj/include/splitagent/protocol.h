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

#ifndef SPLITAGENT_PROTOCOL_H_
#define SPLITAGENT_PROTOCOL_H_

// Wire messages between the privacy agent and the reasoning agent.
//
// Frame: 4-byte big-endian body length, then the body. The body is compact
// JSON with sorted keys:
//   {"payload":{...},"seq":N,"session_id":"...","type":"HELLO"}
// Decoding rejects any body that does not re-encode to the same bytes, so
// every accepted frame is canonical and encode(decode(b)) == b.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/core_model.h"

namespace splitagent {

inline constexpr std::size_t kDefaultMaxFrameBytes = 16u << 20;

enum class MessageType {
  kHello,
  kAck,
  kContextShare,
  kToolRequest,
  kToolResult,
  kBudgetUpdate,
  kError,
  kResponse,
};

inline constexpr MessageType kAllMessageTypes[] = {
    MessageType::kHello,        MessageType::kAck,        MessageType::kContextShare,
    MessageType::kToolRequest,  MessageType::kToolResult, MessageType::kBudgetUpdate,
    MessageType::kError,        MessageType::kResponse,
};

const char* MessageTypeName(MessageType type);
std::optional<MessageType> ParseMessageType(absl::string_view name);

enum class PrivacyLevel { kPublic, kInternal, kConfidential, kRestricted };

const char* PrivacyLevelName(PrivacyLevel level);
std::optional<PrivacyLevel> ParsePrivacyLevel(absl::string_view name);

struct HelloPayload {
  TaskType task_type = TaskType::kContractReview;
  PrivacyLevel privacy_level = PrivacyLevel::kConfidential;
  double budget = 0.0;

  friend bool operator==(const HelloPayload&, const HelloPayload&) = default;
};

struct AckPayload {
  std::vector<std::string> capabilities;
  std::vector<std::string> abstractions;

  friend bool operator==(const AckPayload&, const AckPayload&) = default;
};

// Carries the token vocabulary only. The entity -> token map never leaves
// the privacy side.
struct ContextSharePayload {
  std::string sanitized_data;
  std::vector<std::string> abstraction_vocab;
  double privacy_cost = 0.0;
  double utility_preserved = 0.0;
  std::string instruction;

  friend bool operator==(const ContextSharePayload&, const ContextSharePayload&) = default;
};

struct ToolRequestPayload {
  std::string request_id;
  std::string tool_id;
  // Abstract handle the tool runs against, e.g. "context" for the documents
  // behind the latest share. Never raw data.
  std::string target;

  friend bool operator==(const ToolRequestPayload&, const ToolRequestPayload&) = default;
};

struct ToolProof {
  std::string tool_id;
  std::string input_commitment;   // hex SHA-256
  std::string output_commitment;  // hex SHA-256
  std::string output_abstract;
  std::string nonce;
  // Binds the fields above together; see tool_proof.h.
  std::string proof_digest;

  friend bool operator==(const ToolProof&, const ToolProof&) = default;
};

struct ToolResultPayload {
  std::string request_id;
  ToolProof proof;

  friend bool operator==(const ToolResultPayload&, const ToolResultPayload&) = default;
};

struct BudgetUpdatePayload {
  double spent = 0.0;
  double remaining = 0.0;
  std::string state;  // ACTIVE, BUDGET_LOW or DEPLETED

  friend bool operator==(const BudgetUpdatePayload&, const BudgetUpdatePayload&) = default;
};

struct ErrorPayload {
  std::string code;
  std::string message;

  friend bool operator==(const ErrorPayload&, const ErrorPayload&) = default;
};

// Reasoning output returned for a CONTEXT_SHARE.
struct ResponsePayload {
  std::vector<std::string> plan;
  std::vector<std::string> findings;
  std::vector<std::string> recommendations;

  friend bool operator==(const ResponsePayload&, const ResponsePayload&) = default;
};

using Payload =
    std::variant<HelloPayload, AckPayload, ContextSharePayload, ToolRequestPayload,
                 ToolResultPayload, BudgetUpdatePayload, ErrorPayload, ResponsePayload>;

struct ProtocolMessage {
  std::string session_id;
  std::uint64_t seq = 0;
  Payload payload;

  MessageType type() const { return static_cast<MessageType>(payload.index()); }
  friend bool operator==(const ProtocolMessage&, const ProtocolMessage&) = default;
};

// Checks the variant invariants (positive budget, non-empty capabilities,
// privacy_cost >= 0, utility in [0, 1], ...).
absl::Status ValidatePayload(const Payload& payload);

// Canonical body without the length prefix.
absl::StatusOr<std::string> EncodeBody(const ProtocolMessage& msg);
absl::StatusOr<ProtocolMessage> DecodeBody(absl::string_view body);

// Errors: PayloadInvalid.
absl::StatusOr<std::string> Encode(const ProtocolMessage& msg,
                                   std::size_t max_frame = kDefaultMaxFrameBytes);
// Exactly one frame. Errors: FrameTruncated, OversizeFrame, SchemaViolation.
absl::StatusOr<ProtocolMessage> Decode(absl::string_view frame,
                                       std::size_t max_frame = kDefaultMaxFrameBytes);

// Streaming helper: the length of the first complete frame in `buffer`,
// 0 if more bytes are needed. OversizeFrame if the prefix is too large.
absl::StatusOr<std::size_t> CompleteFrameLength(absl::string_view buffer,
                                                std::size_t max_frame = kDefaultMaxFrameBytes);

}  // namespace splitagent

#endif  // SPLITAGENT_PROTOCOL_H_
