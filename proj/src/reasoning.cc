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

#include "splitagent/reasoning.h"

#include <algorithm>
#include <map>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "httplib.h"
#include "json.hpp"
#include "splitagent/status.h"
#include "splitagent/tool_proof.h"

namespace splitagent {
namespace {

bool IsTokenByte(char c) {
  return absl::ascii_isupper(static_cast<unsigned char>(c)) ||
         absl::ascii_isdigit(static_cast<unsigned char>(c)) || c == '_';
}

bool IsKnownToken(absl::string_view word) {
  if (!IsValidTokenLabel(word)) return false;
  return KindForTokenPrefix(word.substr(0, word.find('_'))).has_value();
}

// Token labels in order of appearance, with repeats.
std::vector<std::string> ScanTokens(absl::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsTokenByte(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsTokenByte(text[j])) ++j;
    const bool bounded = i == 0 || !absl::ascii_isalnum(static_cast<unsigned char>(text[i - 1]));
    const absl::string_view word = text.substr(i, j - i);
    if (bounded && (j == text.size() || !absl::ascii_islower(static_cast<unsigned char>(text[j]))) &&
        IsKnownToken(word)) {
      tokens.emplace_back(word);
    }
    i = j;
  }
  return tokens;
}

std::string MaskTokens(absl::string_view text, char mask) {
  std::string out(text);
  std::size_t i = 0;
  while (i < out.size()) {
    if (!IsTokenByte(out[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < out.size() && IsTokenByte(out[j])) ++j;
    if (IsKnownToken(absl::string_view(out).substr(i, j - i))) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(i),
                out.begin() + static_cast<std::ptrdiff_t>(j), mask);
    }
    i = j;
  }
  return out;
}

std::vector<std::string> ToolHints(absl::string_view instruction) {
  std::vector<std::string> ids;
  const std::size_t open = instruction.find("[tools:");
  if (open == absl::string_view::npos) return ids;
  const std::size_t close = instruction.find(']', open);
  if (close == absl::string_view::npos) return ids;
  const absl::string_view list = instruction.substr(open + 7, close - open - 7);
  for (absl::string_view id : absl::StrSplit(list, ',', absl::SkipWhitespace())) {
    ids.emplace_back(absl::StripAsciiWhitespace(id));
  }
  return ids;
}

class StubBackend : public ReasoningBackend {
 public:
  explicit StubBackend(StubOptions options) : options_(options) {}

  absl::StatusOr<ReasoningReply> Respond(const ReasoningRequest& request) override {
    ReasoningReply reply;
    if (request.tool_outputs.empty()) {
      reply.tool_ids = ToolHints(request.instruction);
      if (!reply.tool_ids.empty()) return reply;
    }
    const std::vector<std::string> tokens = ScanTokens(request.sanitized_text);
    std::vector<std::string> classes;
    std::map<std::string, std::vector<std::string>> members;
    std::map<std::string, int> counts;
    for (const std::string& t : tokens) {
      const std::string prefix = t.substr(0, t.find('_'));
      if (!members.count(prefix)) classes.push_back(prefix);
      auto& list = members[prefix];
      if (std::find(list.begin(), list.end(), t) == list.end()) list.push_back(t);
      ++counts[t];
    }
    for (std::size_t i = 0; i < classes.size(); ++i) {
      reply.response.plan.push_back(absl::StrCat("Step ", i + 1, ": review ", classes[i],
                                                 " references ",
                                                 absl::StrJoin(members[classes[i]], ", ")));
    }
    std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [token, n] : ranked) {
      reply.response.findings.push_back(absl::StrCat(token, " x", n));
    }
    for (const auto& [tool, abstract] : request.tool_outputs) {
      reply.response.recommendations.push_back(absl::StrCat("Use ", tool, " result ", abstract));
    }
    if (!classes.empty()) {
      reply.response.recommendations.push_back("Resolve tokens on the private side before acting");
    }
    if (LongestEcho(reply.response, request.sanitized_text) > options_.echo_limit) {
      return absl::InternalError("stub response exceeds echo limit");
    }
    return reply;
  }

 private:
  StubOptions options_;
};

class HttpBackend : public ReasoningBackend {
 public:
  HttpBackend(std::string host, int port, std::string path, int timeout_ms)
      : host_(std::move(host)), port_(port), path_(std::move(path)), timeout_ms_(timeout_ms) {}

  absl::StatusOr<ReasoningReply> Respond(const ReasoningRequest& request) override {
    nlohmann::json body = {{"sanitized_text", request.sanitized_text},
                           {"vocabulary", request.vocabulary},
                           {"instruction", request.instruction},
                           {"tool_outputs", request.tool_outputs}};
    httplib::Client client(host_, port_);
    const auto timeout = std::chrono::milliseconds(timeout_ms_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Result result;
    for (int attempt = 0; attempt < 2; ++attempt) {
      result = client.Post(path_, body.dump(), "application/json");
      if (result && result->status == 200) break;
    }
    if (!result || result->status != 200) {
      return MakeError(ErrorKind::kPeerUnavailable,
                       absl::StrCat("reasoning endpoint ", host_, ":", port_, " failed"));
    }
    try {
      const nlohmann::json j = nlohmann::json::parse(result->body);
      ReasoningReply reply;
      reply.response.plan = j.value("plan", std::vector<std::string>{});
      reply.response.findings = j.value("findings", std::vector<std::string>{});
      reply.response.recommendations = j.value("recommendations", std::vector<std::string>{});
      reply.tool_ids = j.value("tools", std::vector<std::string>{});
      return reply;
    } catch (const nlohmann::json::exception& e) {
      return MakeError(ErrorKind::kSchemaViolation,
                       absl::StrCat("bad reasoning endpoint reply: ", e.what()));
    }
  }

 private:
  std::string host_;
  int port_;
  std::string path_;
  int timeout_ms_;
};

}  // namespace

std::size_t LongestEcho(const ResponsePayload& response, const std::string& input) {
  const std::string haystack = MaskTokens(input, '\x02');
  std::size_t longest = 0;
  auto scan = [&](const std::vector<std::string>& lines) {
    for (const std::string& raw : lines) {
      const std::string line = MaskTokens(raw, '\x01');
      for (std::size_t i = 0; i + longest < line.size(); ++i) {
        std::size_t len = longest + 1;
        while (i + len <= line.size() && haystack.find(line.substr(i, len)) != std::string::npos) {
          longest = len++;
        }
      }
    }
  };
  scan(response.plan);
  scan(response.findings);
  scan(response.recommendations);
  return longest;
}

std::unique_ptr<ReasoningBackend> MakeStubBackend(StubOptions options) {
  return std::make_unique<StubBackend>(options);
}

std::unique_ptr<ReasoningBackend> MakeHttpBackend(std::string host, int port, std::string path,
                                                  int timeout_ms) {
  return std::make_unique<HttpBackend>(std::move(host), port, std::move(path), timeout_ms);
}

ReasoningAgent::ReasoningAgent(ReasoningBackend& backend, std::vector<std::string> capabilities)
    : backend_(backend), capabilities_(std::move(capabilities)) {}

ProtocolMessage ReasoningAgent::Outbound(Payload payload) {
  ProtocolMessage msg{session_.session_id, next_seq_++, std::move(payload)};
  session_ = Step(session_, SessionEvent::Sent(msg)).session;
  return msg;
}

std::vector<ProtocolMessage> ReasoningAgent::Emit(std::vector<Payload> payloads) {
  std::vector<ProtocolMessage> out;
  for (Payload& p : payloads) out.push_back(Outbound(std::move(p)));
  return out;
}

ProtocolMessage ReasoningAgent::ErrorMessage(const std::string& code,
                                             const std::string& message) {
  return Outbound(ErrorPayload{code, message});
}

std::vector<ProtocolMessage> ReasoningAgent::Finish() {
  auto reply = backend_.Respond(current_);
  if (!reply.ok()) return {ErrorMessage("BackendFailure", std::string(reply.status().message()))};
  return Emit({reply->response});
}

std::vector<ProtocolMessage> ReasoningAgent::Handle(const ProtocolMessage& inbound) {
  if (const auto* update = std::get_if<BudgetUpdatePayload>(&inbound.payload)) {
    // Mirror the peer's budget transitions before checking the message.
    if (update->state == "BUDGET_LOW" && session_.state == SessionState::kActive) {
      session_ = Step(session_, SessionEvent::BudgetLow()).session;
    } else if (update->state == "DEPLETED" && session_.state != SessionState::kDepleted &&
               session_.state != SessionState::kClosed) {
      session_ = Step(session_, SessionEvent::BudgetDepleted()).session;
    }
  }
  const StepResult step = Step(session_, SessionEvent::Received(inbound));
  if (!step.accepted()) {
    const std::string detail = step.actions.empty() ? "rejected" : step.actions.front().detail;
    return {ErrorMessage("ProtocolViolation", detail)};
  }
  session_ = step.session;

  switch (inbound.type()) {
    case MessageType::kHello: {
      AckPayload ack;
      ack.capabilities = capabilities_;
      for (EntityKind kind : kAllEntityKinds) ack.abstractions.push_back(TokenPrefix(kind));
      return Emit({ack});
    }
    case MessageType::kContextShare: {
      const auto& share = std::get<ContextSharePayload>(inbound.payload);
      current_ = {share.sanitized_data, share.abstraction_vocab, share.instruction, {}};
      pending_.clear();
      auto reply = backend_.Respond(current_);
      if (!reply.ok()) {
        return {ErrorMessage("BackendFailure", std::string(reply.status().message()))};
      }
      if (reply->tool_ids.empty()) return Emit({reply->response});
      std::vector<Payload> requests;
      for (const std::string& tool : reply->tool_ids) {
        const std::string id = absl::StrCat("req-", ++request_counter_);
        pending_.push_back(id);
        requests.push_back(ToolRequestPayload{id, tool, "context"});
      }
      return Emit(std::move(requests));
    }
    case MessageType::kToolResult: {
      const auto& result = std::get<ToolResultPayload>(inbound.payload);
      auto it = std::find(pending_.begin(), pending_.end(), result.request_id);
      if (it == pending_.end()) {
        return {ErrorMessage("ProtocolViolation", "unexpected tool result")};
      }
      pending_.erase(it);
      if (VerifyToolProof(result.proof, result.proof.output_commitment)) {
        ++verified_;
        current_.tool_outputs.emplace_back(result.proof.tool_id, result.proof.output_abstract);
      } else {
        ++rejected_;
      }
      return pending_.empty() ? Finish() : std::vector<ProtocolMessage>{};
    }
    case MessageType::kError: {
      const auto& error = std::get<ErrorPayload>(inbound.payload);
      auto it = std::find(pending_.begin(), pending_.end(), error.message);
      if (it == pending_.end()) return {};
      pending_.erase(it);
      return pending_.empty() ? Finish() : std::vector<ProtocolMessage>{};
    }
    case MessageType::kBudgetUpdate:
      return {};
    default:
      return {ErrorMessage("ProtocolViolation",
                           absl::StrCat("unexpected ", MessageTypeName(inbound.type())))};
  }
}

}  // namespace splitagent
