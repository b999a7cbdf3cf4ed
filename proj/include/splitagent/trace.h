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

#ifndef SPLITAGENT_TRACE_H_
#define SPLITAGENT_TRACE_H_

// Captured session traces, one message per line:
//
//   <logical timestamp> TAB <P2R|R2P> TAB <canonical message body>
//
// Lines starting with '#' are metadata of the form "# key value". A trace
// only holds what crossed the wire; evaluator ground truth lives elsewhere.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/protocol.h"

namespace splitagent {

enum class WireDirection { kPrivacyToReasoning, kReasoningToPrivacy };

struct TraceRecord {
  std::int64_t timestamp = 0;
  WireDirection direction = WireDirection::kPrivacyToReasoning;
  ProtocolMessage message;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Trace {
  std::map<std::string, std::string> meta;
  std::vector<TraceRecord> records;

  // CONTEXT_SHARE payloads in order.
  std::vector<ContextSharePayload> Shares() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

absl::StatusOr<std::string> FormatTrace(const Trace& trace);
absl::StatusOr<Trace> ParseTrace(absl::string_view text);

absl::StatusOr<Trace> ReadTraceFile(const std::string& path);
absl::Status WriteTraceFile(const std::string& path, const Trace& trace);

// Every *.trace file in `dir`, sorted by file name.
absl::StatusOr<std::vector<std::pair<std::string, Trace>>> ReadTraceDir(const std::string& dir);

// Whole-file helpers shared by the CLI and the harness.
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, absl::string_view contents);

}  // namespace splitagent

#endif  // SPLITAGENT_TRACE_H_
