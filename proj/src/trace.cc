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

#include "splitagent/trace.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "splitagent/status.h"

namespace splitagent {

std::vector<ContextSharePayload> Trace::Shares() const {
  std::vector<ContextSharePayload> shares;
  for (const TraceRecord& r : records) {
    if (const auto* share = std::get_if<ContextSharePayload>(&r.message.payload)) {
      shares.push_back(*share);
    }
  }
  return shares;
}

absl::StatusOr<std::string> FormatTrace(const Trace& trace) {
  std::string out = "# format splitagent-trace-1\n";
  for (const auto& [key, value] : trace.meta) {
    if (key.find_first_of(" \n") != std::string::npos ||
        value.find('\n') != std::string::npos) {
      return absl::InvalidArgumentError(absl::StrCat("bad trace metadata key ", key));
    }
    absl::StrAppend(&out, "# ", key, " ", value, "\n");
  }
  for (const TraceRecord& r : trace.records) {
    SPLITAGENT_ASSIGN_OR_RETURN(const std::string body, EncodeBody(r.message));
    absl::StrAppend(&out, r.timestamp, "\t",
                    r.direction == WireDirection::kPrivacyToReasoning ? "P2R" : "R2P", "\t",
                    body, "\n");
  }
  return out;
}

absl::StatusOr<Trace> ParseTrace(absl::string_view text) {
  Trace trace;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    ++line_no;
    if (line[0] == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line[0] == ' ') line.remove_prefix(1);
      const std::size_t space = line.find(' ');
      if (space == absl::string_view::npos) continue;
      const std::string key(line.substr(0, space));
      if (key != "format") trace.meta[key] = std::string(line.substr(space + 1));
      continue;
    }
    std::vector<absl::string_view> fields = absl::StrSplit(line, absl::MaxSplits('\t', 2));
    TraceRecord record;
    if (fields.size() != 3 || !absl::SimpleAtoi(fields[0], &record.timestamp)) {
      return MakeError(ErrorKind::kSchemaViolation,
                       absl::StrCat("trace line ", line_no, " is malformed"));
    }
    if (fields[1] == "P2R") {
      record.direction = WireDirection::kPrivacyToReasoning;
    } else if (fields[1] == "R2P") {
      record.direction = WireDirection::kReasoningToPrivacy;
    } else {
      return MakeError(ErrorKind::kSchemaViolation,
                       absl::StrCat("trace line ", line_no, ": bad direction"));
    }
    SPLITAGENT_ASSIGN_OR_RETURN(record.message, DecodeBody(fields[2]));
    trace.records.push_back(std::move(record));
  }
  return trace;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, absl::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot write ", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return MakeError(ErrorKind::kIoFailure, absl::StrCat("short write to ", path));
  return absl::OkStatus();
}

absl::StatusOr<Trace> ReadTraceFile(const std::string& path) {
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  return ParseTrace(text);
}

absl::Status WriteTraceFile(const std::string& path, const Trace& trace) {
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string text, FormatTrace(trace));
  return WriteFile(path, text);
}

absl::StatusOr<std::vector<std::pair<std::string, Trace>>> ReadTraceDir(
    const std::string& dir) {
  std::error_code ec;
  std::vector<std::string> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".trace") paths.push_back(entry.path().string());
  }
  if (ec) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot list ", dir));
  std::sort(paths.begin(), paths.end());
  std::vector<std::pair<std::string, Trace>> traces;
  for (const std::string& path : paths) {
    SPLITAGENT_ASSIGN_OR_RETURN(Trace trace, ReadTraceFile(path));
    traces.emplace_back(std::filesystem::path(path).stem().string(), std::move(trace));
  }
  return traces;
}

}  // namespace splitagent
