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

#ifndef SPLITAGENT_STATUS_H_
#define SPLITAGENT_STATUS_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace splitagent {

// Named failure conditions. Each maps onto an absl::StatusCode and is attached
// to the status as a payload so callers can branch on the precise condition.
enum class ErrorKind {
  kOverlappingSpans,
  kZeroEpsilon,
  kUtilityBelowThreshold,
  kBudgetExceeded,
  kPayloadInvalid,
  kFrameTruncated,
  kSchemaViolation,
  kOversizeFrame,
  kPeerUnavailable,
  kProtocolViolation,
  kUnknownTool,
  kEmptyTrace,
  kFewerThanTwoTraces,
  kSpecInvalid,
  kConfigInvalid,
  kIoFailure,
};

const char* ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, absl::string_view message);

// Returns the kind attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

inline bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  return ErrorKindOf(status) == kind;
}

}  // namespace splitagent

#define SPLITAGENT_RETURN_IF_ERROR(expr)          \
  do {                                            \
    const absl::Status _sa_status = (expr);       \
    if (!_sa_status.ok()) return _sa_status;      \
  } while (0)

#define SPLITAGENT_CONCAT_INNER(a, b) a##b
#define SPLITAGENT_CONCAT(a, b) SPLITAGENT_CONCAT_INNER(a, b)

#define SPLITAGENT_ASSIGN_OR_RETURN(lhs, rexpr) \
  SPLITAGENT_ASSIGN_OR_RETURN_IMPL(             \
      SPLITAGENT_CONCAT(_sa_statusor_, __LINE__), lhs, rexpr)

#define SPLITAGENT_ASSIGN_OR_RETURN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                     \
  if (!statusor.ok()) return statusor.status();                \
  lhs = std::move(statusor).value()

#endif  // SPLITAGENT_STATUS_H_
