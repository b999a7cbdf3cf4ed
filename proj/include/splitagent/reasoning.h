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

#ifndef SPLITAGENT_REASONING_H_
#define SPLITAGENT_REASONING_H_

// Cloud side. Nothing here takes a Document: the reasoning agent only ever
// sees CONTEXT_SHARE payloads, tool abstracts and budget updates.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "splitagent/protocol.h"
#include "splitagent/session.h"

namespace splitagent {

struct ReasoningRequest {
  std::string sanitized_text;
  std::vector<std::string> vocabulary;
  std::string instruction;
  // (tool_id, output_abstract) for tools already run this turn.
  std::vector<std::pair<std::string, std::string>> tool_outputs;
};

struct ReasoningReply {
  ResponsePayload response;
  // Tools the backend wants run before it answers. Ignored once
  // tool_outputs is non-empty.
  std::vector<std::string> tool_ids;
};

class ReasoningBackend {
 public:
  virtual ~ReasoningBackend() = default;
  virtual absl::StatusOr<ReasoningReply> Respond(const ReasoningRequest& request) = 0;
};

struct StubOptions {
  // Longest run of input bytes a response may repeat, tokens aside.
  std::size_t echo_limit = 24;
};

// Deterministic template responder. Plan: one step per token class in
// first-appearance order. Findings: token counts, most frequent first.
// Tool requests come from a "[tools: a, b]" hint in the instruction.
std::unique_ptr<ReasoningBackend> MakeStubBackend(StubOptions options = {});

// Longest substring of `response` text (plan, findings, recommendations)
// that also occurs in `input` after masking out token labels. Used to check
// the echo limit.
std::size_t LongestEcho(const ResponsePayload& response, const std::string& input);

// POSTs the request as JSON to http://host:port/path. One retry on
// transport failure. PeerUnavailable after that.
std::unique_ptr<ReasoningBackend> MakeHttpBackend(std::string host, int port,
                                                  std::string path = "/respond",
                                                  int timeout_ms = 30000);

// Reasoning endpoint state machine. Handle() consumes one inbound message and
// returns the messages to send back, in order.
class ReasoningAgent {
 public:
  explicit ReasoningAgent(ReasoningBackend& backend,
                          std::vector<std::string> capabilities = {"plan", "findings",
                                                                   "tools"});

  std::vector<ProtocolMessage> Handle(const ProtocolMessage& inbound);

  const Session& session() const { return session_; }
  std::size_t tool_results_verified() const { return verified_; }
  std::size_t tool_results_rejected() const { return rejected_; }

 private:
  ProtocolMessage Outbound(Payload payload);
  std::vector<ProtocolMessage> Emit(std::vector<Payload> payloads);
  std::vector<ProtocolMessage> Finish();
  ProtocolMessage ErrorMessage(const std::string& code, const std::string& message);

  ReasoningBackend& backend_;
  std::vector<std::string> capabilities_;
  Session session_;
  std::uint64_t next_seq_ = 1;
  ReasoningRequest current_;
  std::vector<std::string> pending_;  // request ids awaiting results
  std::uint64_t request_counter_ = 0;
  std::size_t verified_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace splitagent

#endif  // SPLITAGENT_REASONING_H_
