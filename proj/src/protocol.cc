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

#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "splitagent/status.h"

namespace splitagent {

using nlohmann::json;

namespace {

constexpr const char* kTypeNames[] = {"HELLO",         "ACK",   "CONTEXT_SHARE",
                                      "TOOL_REQUEST",  "TOOL_RESULT",
                                      "BUDGET_UPDATE", "ERROR", "RESPONSE"};
constexpr const char* kLevelNames[] = {"public", "internal", "confidential", "restricted"};

absl::Status Schema(absl::string_view what) {
  return MakeError(ErrorKind::kSchemaViolation, what);
}

absl::Status Invalid(absl::string_view what) {
  return MakeError(ErrorKind::kPayloadInvalid, what);
}

// Strict field access: the object must have exactly `keys`.
absl::Status ExpectKeys(const json& obj, std::set<std::string> keys, absl::string_view where) {
  if (!obj.is_object()) return Schema(absl::StrCat(where, ": expected an object"));
  for (const auto& [key, value] : obj.items()) {
    if (keys.erase(key) == 0) {
      return Schema(absl::StrCat(where, ": unknown field '", key, "'"));
    }
  }
  if (!keys.empty()) {
    return Schema(absl::StrCat(where, ": missing field '", *keys.begin(), "'"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> GetString(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_string()) return Schema(absl::StrCat("'", key, "' must be a string"));
  return v.get<std::string>();
}

absl::StatusOr<double> GetReal(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_number_float()) return Schema(absl::StrCat("'", key, "' must be a real"));
  return v.get<double>();
}

absl::StatusOr<std::vector<std::string>> GetStrings(const json& obj, const char* key) {
  const json& v = obj.at(key);
  if (!v.is_array()) return Schema(absl::StrCat("'", key, "' must be an array"));
  std::vector<std::string> out;
  for (const json& item : v) {
    if (!item.is_string()) return Schema(absl::StrCat("'", key, "' must hold strings"));
    out.push_back(item.get<std::string>());
  }
  return out;
}

json ProofToJson(const ToolProof& p) {
  return {{"tool_id", p.tool_id},
          {"input_commitment", p.input_commitment},
          {"output_commitment", p.output_commitment},
          {"output_abstract", p.output_abstract},
          {"nonce", p.nonce},
          {"proof_digest", p.proof_digest}};
}

absl::StatusOr<ToolProof> ProofFromJson(const json& obj) {
  SPLITAGENT_RETURN_IF_ERROR(ExpectKeys(obj,
                                        {"tool_id", "input_commitment", "output_commitment",
                                         "output_abstract", "nonce", "proof_digest"},
                                        "proof"));
  ToolProof p;
  SPLITAGENT_ASSIGN_OR_RETURN(p.tool_id, GetString(obj, "tool_id"));
  SPLITAGENT_ASSIGN_OR_RETURN(p.input_commitment, GetString(obj, "input_commitment"));
  SPLITAGENT_ASSIGN_OR_RETURN(p.output_commitment, GetString(obj, "output_commitment"));
  SPLITAGENT_ASSIGN_OR_RETURN(p.output_abstract, GetString(obj, "output_abstract"));
  SPLITAGENT_ASSIGN_OR_RETURN(p.nonce, GetString(obj, "nonce"));
  SPLITAGENT_ASSIGN_OR_RETURN(p.proof_digest, GetString(obj, "proof_digest"));
  return p;
}

json ToolRequestToJson(const ToolRequestPayload& p) {
  return {{"request_id", p.request_id}, {"tool_id", p.tool_id}, {"target", p.target}};
}

// Reals are always written as JSON floats so integral values keep a
// fractional part ("5.0") and decode as reals.
struct PayloadToJson {
  json operator()(const HelloPayload& p) const {
    return {{"task_type", TaskTypeName(p.task_type)},
            {"privacy_level", PrivacyLevelName(p.privacy_level)},
            {"budget", p.budget}};
  }
  json operator()(const AckPayload& p) const {
    return {{"capabilities", p.capabilities}, {"abstractions", p.abstractions}};
  }
  json operator()(const ContextSharePayload& p) const {
    return {{"sanitized_data", p.sanitized_data},
            {"abstraction_vocab", p.abstraction_vocab},
            {"privacy_cost", p.privacy_cost},
            {"utility_preserved", p.utility_preserved},
            {"instruction", p.instruction}};
  }
  json operator()(const ToolRequestPayload& p) const { return ToolRequestToJson(p); }
  json operator()(const ToolResultPayload& p) const {
    return {{"request_id", p.request_id}, {"proof", ProofToJson(p.proof)}};
  }
  json operator()(const BudgetUpdatePayload& p) const {
    return {{"spent", p.spent}, {"remaining", p.remaining}, {"state", p.state}};
  }
  json operator()(const ErrorPayload& p) const {
    return {{"code", p.code}, {"message", p.message}};
  }
  json operator()(const ResponsePayload& p) const {
    return {{"plan", p.plan},
            {"findings", p.findings},
            {"recommendations", p.recommendations}};
  }
};

absl::StatusOr<Payload> PayloadFromJson(MessageType type, const json& obj) {
  switch (type) {
    case MessageType::kHello: {
      SPLITAGENT_RETURN_IF_ERROR(
          ExpectKeys(obj, {"task_type", "privacy_level", "budget"}, "HELLO"));
      HelloPayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(const std::string task, GetString(obj, "task_type"));
      SPLITAGENT_ASSIGN_OR_RETURN(const std::string level, GetString(obj, "privacy_level"));
      std::optional<TaskType> parsed_task = ParseTaskType(task);
      std::optional<PrivacyLevel> parsed_level = ParsePrivacyLevel(level);
      if (!parsed_task) return Schema(absl::StrCat("unknown task_type ", task));
      if (!parsed_level) return Schema(absl::StrCat("unknown privacy_level ", level));
      p.task_type = *parsed_task;
      p.privacy_level = *parsed_level;
      SPLITAGENT_ASSIGN_OR_RETURN(p.budget, GetReal(obj, "budget"));
      return p;
    }
    case MessageType::kAck: {
      SPLITAGENT_RETURN_IF_ERROR(ExpectKeys(obj, {"capabilities", "abstractions"}, "ACK"));
      AckPayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.capabilities, GetStrings(obj, "capabilities"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.abstractions, GetStrings(obj, "abstractions"));
      return p;
    }
    case MessageType::kContextShare: {
      SPLITAGENT_RETURN_IF_ERROR(ExpectKeys(obj,
                                            {"sanitized_data", "abstraction_vocab",
                                             "privacy_cost", "utility_preserved",
                                             "instruction"},
                                            "CONTEXT_SHARE"));
      ContextSharePayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.sanitized_data, GetString(obj, "sanitized_data"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.abstraction_vocab, GetStrings(obj, "abstraction_vocab"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.privacy_cost, GetReal(obj, "privacy_cost"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.utility_preserved, GetReal(obj, "utility_preserved"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.instruction, GetString(obj, "instruction"));
      return p;
    }
    case MessageType::kToolRequest: {
      SPLITAGENT_RETURN_IF_ERROR(
          ExpectKeys(obj, {"request_id", "tool_id", "target"}, "TOOL_REQUEST"));
      ToolRequestPayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.request_id, GetString(obj, "request_id"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.tool_id, GetString(obj, "tool_id"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.target, GetString(obj, "target"));
      return p;
    }
    case MessageType::kToolResult: {
      SPLITAGENT_RETURN_IF_ERROR(ExpectKeys(obj, {"request_id", "proof"}, "TOOL_RESULT"));
      ToolResultPayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.request_id, GetString(obj, "request_id"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.proof, ProofFromJson(obj.at("proof")));
      return p;
    }
    case MessageType::kBudgetUpdate: {
      SPLITAGENT_RETURN_IF_ERROR(
          ExpectKeys(obj, {"spent", "remaining", "state"}, "BUDGET_UPDATE"));
      BudgetUpdatePayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.spent, GetReal(obj, "spent"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.remaining, GetReal(obj, "remaining"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.state, GetString(obj, "state"));
      return p;
    }
    case MessageType::kError: {
      SPLITAGENT_RETURN_IF_ERROR(ExpectKeys(obj, {"code", "message"}, "ERROR"));
      ErrorPayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.code, GetString(obj, "code"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.message, GetString(obj, "message"));
      return p;
    }
    case MessageType::kResponse: {
      SPLITAGENT_RETURN_IF_ERROR(
          ExpectKeys(obj, {"plan", "findings", "recommendations"}, "RESPONSE"));
      ResponsePayload p;
      SPLITAGENT_ASSIGN_OR_RETURN(p.plan, GetStrings(obj, "plan"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.findings, GetStrings(obj, "findings"));
      SPLITAGENT_ASSIGN_OR_RETURN(p.recommendations, GetStrings(obj, "recommendations"));
      return p;
    }
  }
  return Schema("unknown message type");
}

bool IsUnitInterval(double v) { return v >= 0.0 && v <= 1.0; }

struct PayloadValidator {
  absl::Status operator()(const HelloPayload& p) const {
    if (!(p.budget > 0.0) || !std::isfinite(p.budget)) return Invalid("HELLO budget must be > 0");
    return absl::OkStatus();
  }
  absl::Status operator()(const AckPayload& p) const {
    if (p.capabilities.empty()) return Invalid("ACK needs at least one capability");
    return absl::OkStatus();
  }
  absl::Status operator()(const ContextSharePayload& p) const {
    if (!(p.privacy_cost >= 0.0) || !std::isfinite(p.privacy_cost)) {
      return Invalid("privacy_cost must be >= 0");
    }
    if (!IsUnitInterval(p.utility_preserved)) {
      return Invalid("utility_preserved must lie in [0, 1]");
    }
    for (const std::string& label : p.abstraction_vocab) {
      if (!IsValidTokenLabel(label)) {
        return Invalid(absl::StrCat("bad vocabulary label '", label, "'"));
      }
    }
    return absl::OkStatus();
  }
  absl::Status operator()(const ToolRequestPayload& p) const {
    if (p.tool_id.empty() || p.request_id.empty()) {
      return Invalid("TOOL_REQUEST needs tool_id and request_id");
    }
    return absl::OkStatus();
  }
  absl::Status operator()(const ToolResultPayload& p) const {
    if (p.request_id.empty()) return Invalid("TOOL_RESULT needs request_id");
    return absl::OkStatus();
  }
  absl::Status operator()(const BudgetUpdatePayload& p) const {
    if (!(p.spent >= 0.0) || !(p.remaining >= 0.0)) {
      return Invalid("BUDGET_UPDATE amounts must be >= 0");
    }
    if (p.state != "ACTIVE" && p.state != "BUDGET_LOW" && p.state != "DEPLETED") {
      return Invalid(absl::StrCat("unknown budget state ", p.state));
    }
    return absl::OkStatus();
  }
  absl::Status operator()(const ErrorPayload& p) const {
    if (p.code.empty()) return Invalid("ERROR needs a code");
    return absl::OkStatus();
  }
  absl::Status operator()(const ResponsePayload&) const { return absl::OkStatus(); }
};

void PutLength(std::string& out, std::uint32_t n) {
  out.push_back(static_cast<char>((n >> 24) & 0xFF));
  out.push_back(static_cast<char>((n >> 16) & 0xFF));
  out.push_back(static_cast<char>((n >> 8) & 0xFF));
  out.push_back(static_cast<char>(n & 0xFF));
}

std::uint32_t GetLength(absl::string_view bytes) {
  return (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[0])) << 24) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[1])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[2])) << 8) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[3]));
}

}  // namespace

const char* MessageTypeName(MessageType type) {
  return kTypeNames[static_cast<int>(type)];
}

std::optional<MessageType> ParseMessageType(absl::string_view name) {
  for (MessageType t : kAllMessageTypes) {
    if (name == MessageTypeName(t)) return t;
  }
  return std::nullopt;
}

const char* PrivacyLevelName(PrivacyLevel level) {
  return kLevelNames[static_cast<int>(level)];
}

std::optional<PrivacyLevel> ParsePrivacyLevel(absl::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (name == kLevelNames[i]) return static_cast<PrivacyLevel>(i);
  }
  return std::nullopt;
}

absl::Status ValidatePayload(const Payload& payload) {
  return std::visit(PayloadValidator{}, payload);
}

absl::StatusOr<std::string> EncodeBody(const ProtocolMessage& msg) {
  SPLITAGENT_RETURN_IF_ERROR(ValidatePayload(msg.payload));
  json root = {{"type", MessageTypeName(msg.type())},
               {"session_id", msg.session_id},
               {"seq", msg.seq},
               {"payload", std::visit(PayloadToJson{}, msg.payload)}};
  try {
    return root.dump(-1, ' ', /*ensure_ascii=*/false, json::error_handler_t::strict);
  } catch (const json::exception& e) {
    return Invalid(absl::StrCat("payload is not valid UTF-8: ", e.what()));
  }
}

absl::StatusOr<ProtocolMessage> DecodeBody(absl::string_view body) {
  json root = json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) return Schema("body is not JSON");
  try {
    SPLITAGENT_RETURN_IF_ERROR(
        ExpectKeys(root, {"type", "session_id", "seq", "payload"}, "message"));
    SPLITAGENT_ASSIGN_OR_RETURN(const std::string type_name, GetString(root, "type"));
    std::optional<MessageType> type = ParseMessageType(type_name);
    if (!type) return Schema(absl::StrCat("unknown message type '", type_name, "'"));
    if (!root.at("seq").is_number_unsigned()) return Schema("'seq' must be unsigned");
    ProtocolMessage msg;
    SPLITAGENT_ASSIGN_OR_RETURN(msg.session_id, GetString(root, "session_id"));
    msg.seq = root.at("seq").get<std::uint64_t>();
    SPLITAGENT_ASSIGN_OR_RETURN(msg.payload, PayloadFromJson(*type, root.at("payload")));
    absl::Status valid = ValidatePayload(msg.payload);
    if (!valid.ok()) return Schema(valid.message());
    SPLITAGENT_ASSIGN_OR_RETURN(const std::string canonical, EncodeBody(msg));
    if (canonical != body) return Schema("body is not in canonical form");
    return msg;
  } catch (const json::exception& e) {
    return Schema(e.what());
  }
}

absl::StatusOr<std::string> Encode(const ProtocolMessage& msg, std::size_t max_frame) {
  SPLITAGENT_ASSIGN_OR_RETURN(std::string body, EncodeBody(msg));
  if (body.size() > max_frame) {
    return MakeError(ErrorKind::kOversizeFrame,
                     absl::StrCat("body of ", body.size(), " bytes exceeds ", max_frame));
  }
  std::string frame;
  frame.reserve(body.size() + 4);
  PutLength(frame, static_cast<std::uint32_t>(body.size()));
  frame += body;
  return frame;
}

absl::StatusOr<std::size_t> CompleteFrameLength(absl::string_view buffer,
                                                std::size_t max_frame) {
  if (buffer.size() < 4) return 0;
  const std::size_t length = GetLength(buffer);
  if (length > max_frame) {
    return MakeError(ErrorKind::kOversizeFrame,
                     absl::StrCat("frame of ", length, " bytes exceeds ", max_frame));
  }
  if (buffer.size() < 4 + length) return 0;
  return 4 + length;
}

absl::StatusOr<ProtocolMessage> Decode(absl::string_view frame, std::size_t max_frame) {
  if (frame.size() < 4) {
    return MakeError(ErrorKind::kFrameTruncated, "length prefix is incomplete");
  }
  SPLITAGENT_ASSIGN_OR_RETURN(const std::size_t total, CompleteFrameLength(frame, max_frame));
  if (total == 0) {
    return MakeError(ErrorKind::kFrameTruncated,
                     absl::StrCat("frame declares ", GetLength(frame), " bytes, has ",
                                  frame.size() - 4));
  }
  if (total != frame.size()) return Schema("trailing bytes after frame");
  return DecodeBody(frame.substr(4));
}

}  // namespace splitagent
