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

#include "splitagent/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace splitagent {
namespace {

constexpr absl::string_view kPayloadUrl = "type.splitagent/error_kind";

struct KindInfo {
  ErrorKind kind;
  const char* name;
  absl::StatusCode code;
};

constexpr std::array<KindInfo, 16> kKinds = {{
    {ErrorKind::kOverlappingSpans, "OverlappingSpans",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kZeroEpsilon, "ZeroEpsilon", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kUtilityBelowThreshold, "UtilityBelowThreshold",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kBudgetExceeded, "BudgetExceeded",
     absl::StatusCode::kResourceExhausted},
    {ErrorKind::kPayloadInvalid, "PayloadInvalid",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kFrameTruncated, "FrameTruncated",
     absl::StatusCode::kDataLoss},
    {ErrorKind::kSchemaViolation, "SchemaViolation",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kOversizeFrame, "OversizeFrame",
     absl::StatusCode::kOutOfRange},
    {ErrorKind::kPeerUnavailable, "PeerUnavailable",
     absl::StatusCode::kUnavailable},
    {ErrorKind::kProtocolViolation, "ProtocolViolation",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kUnknownTool, "UnknownTool", absl::StatusCode::kNotFound},
    {ErrorKind::kEmptyTrace, "EmptyTrace", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kFewerThanTwoTraces, "FewerThanTwoTraces",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kSpecInvalid, "SpecInvalid", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kConfigInvalid, "ConfigInvalid",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kIoFailure, "IoFailure", absl::StatusCode::kInternal},
}};

const KindInfo& InfoFor(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds.back();
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) { return InfoFor(kind).name; }

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  const KindInfo& info = InfoFor(kind);
  absl::Status status(info.code, absl::StrCat(info.name, ": ", message));
  status.SetPayload(kPayloadUrl, absl::Cord(info.name));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

}  // namespace splitagent
