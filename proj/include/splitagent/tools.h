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

#ifndef SPLITAGENT_TOOLS_H_
#define SPLITAGENT_TOOLS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/config.h"
#include "splitagent/core_model.h"
#include "splitagent/protocol.h"

namespace splitagent {

struct ToolOutput {
  std::string output;    // exact result, stays on the privacy side
  std::string abstract;  // what may be shared
};

struct ToolSpec {
  std::string tool_id;
  std::string description;
  // Must be deterministic for a fixed input so proofs can be replayed.
  std::function<ToolOutput(absl::string_view input)> executor;
  SensitivityLevel sensitivity = SensitivityLevel::kInternal;
};

struct ToolExecution {
  ToolOutput result;
  ToolProof proof;
};

// Local tool executor. Nonces come from a seeded counter: fresh per call,
// reproducible per run.
class ToolRegistry {
 public:
  explicit ToolRegistry(std::uint64_t nonce_seed = 0) : nonce_seed_(nonce_seed) {}

  absl::Status Register(ToolSpec spec);
  const ToolSpec* Find(absl::string_view tool_id) const;
  std::vector<std::string> ToolIds() const;

  // UnknownTool if `tool_id` is not registered.
  absl::StatusOr<ToolExecution> Execute(absl::string_view tool_id, absl::string_view input);

 private:
  std::uint64_t nonce_seed_;
  std::uint64_t calls_ = 0;
  std::map<std::string, ToolSpec, std::less<>> tools_;
};

// word_count, line_count, entity_census and amount_total. The last two use
// the extraction rules in `cfg`.
ToolRegistry DefaultToolRegistry(const SanitizerConfig& cfg, std::uint64_t nonce_seed);

}  // namespace splitagent

#endif  // SPLITAGENT_TOOLS_H_
