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

#include "splitagent/tools.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "splitagent/noise.h"
#include "splitagent/sanitizer.h"
#include "splitagent/status.h"
#include "splitagent/tool_proof.h"
#include "splitagent/utility.h"

namespace splitagent {

absl::Status ToolRegistry::Register(ToolSpec spec) {
  if (spec.tool_id.empty() || !spec.executor) {
    return absl::InvalidArgumentError("tool needs an id and an executor");
  }
  const std::string id = spec.tool_id;
  if (!tools_.emplace(id, std::move(spec)).second) {
    return absl::AlreadyExistsError(absl::StrCat("tool ", id, " already registered"));
  }
  return absl::OkStatus();
}

const ToolSpec* ToolRegistry::Find(absl::string_view tool_id) const {
  auto it = tools_.find(tool_id);
  return it == tools_.end() ? nullptr : &it->second;
}

std::vector<std::string> ToolRegistry::ToolIds() const {
  std::vector<std::string> ids;
  for (const auto& [id, spec] : tools_) ids.push_back(id);
  return ids;
}

absl::StatusOr<ToolExecution> ToolRegistry::Execute(absl::string_view tool_id,
                                                    absl::string_view input) {
  const ToolSpec* spec = Find(tool_id);
  if (spec == nullptr) {
    return MakeError(ErrorKind::kUnknownTool, absl::StrCat("no tool '", tool_id, "'"));
  }
  ToolExecution exec;
  exec.result = spec->executor(input);
  const std::string nonce = absl::StrFormat("%016x", DeriveSeed(nonce_seed_, calls_++));
  exec.proof = MakeToolProof(tool_id, input, exec.result.output, exec.result.abstract, nonce);
  return exec;
}

ToolRegistry DefaultToolRegistry(const SanitizerConfig& cfg, std::uint64_t nonce_seed) {
  ToolRegistry registry(nonce_seed);
  registry
      .Register({"word_count", "number of words in the context",
                 [](absl::string_view input) {
                   const std::string out = absl::StrCat("words=", Words(input).size());
                   return ToolOutput{out, out};
                 },
                 SensitivityLevel::kPublic})
      .IgnoreError();
  registry
      .Register({"line_count", "number of non-empty lines in the context",
                 [](absl::string_view input) {
                   std::size_t lines = 0;
                   bool in_line = false;
                   for (char c : input) {
                     if (c == '\n') {
                       in_line = false;
                     } else if (!in_line) {
                       in_line = true;
                       ++lines;
                     }
                   }
                   const std::string out = absl::StrCat("lines=", lines);
                   return ToolOutput{out, out};
                 },
                 SensitivityLevel::kPublic})
      .IgnoreError();
  const Ruleset rules = cfg.rules;
  registry
      .Register({"entity_census", "count of sensitive entities per kind",
                 [rules](absl::string_view input) {
                   std::map<std::string, int> counts;
                   Document doc{"tool", std::nullopt, std::string(input)};
                   for (const Entity& e : ExtractEntities(doc, rules)) {
                     ++counts[EntityKindName(e.kind)];
                   }
                   const std::string out = absl::StrJoin(counts, ",", absl::PairFormatter("="));
                   return ToolOutput{out, out};
                 },
                 SensitivityLevel::kInternal})
      .IgnoreError();
  const std::vector<BucketBound> buckets = cfg.amount_buckets;
  registry
      .Register({"amount_total", "sum of money amounts, shared as a bucket",
                 [rules, buckets](absl::string_view input) {
                   Document doc{"tool", std::nullopt, std::string(input)};
                   double total = 0.0;
                   for (const Entity& e : ExtractEntities(doc, rules)) {
                     if (auto v = ParseNumericValue(e.kind, e.surface)) total += *v;
                   }
                   return ToolOutput{absl::StrFormat("total=%.2f", total),
                                     absl::StrCat("AMOUNT_", BucketLabel(buckets, total))};
                 },
                 SensitivityLevel::kConfidential})
      .IgnoreError();
  return registry;
}

}  // namespace splitagent
