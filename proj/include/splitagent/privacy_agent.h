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

#ifndef SPLITAGENT_PRIVACY_AGENT_H_
#define SPLITAGENT_PRIVACY_AGENT_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "splitagent/budget.h"
#include "splitagent/config.h"
#include "splitagent/protocol.h"
#include "splitagent/retrieval.h"
#include "splitagent/sanitizer.h"
#include "splitagent/scenario.h"
#include "splitagent/trace.h"
#include "splitagent/transport.h"

namespace splitagent {

struct PrivacyAgentOptions {
  SanitizerConfig config = DefaultSanitizerConfig();
  BudgetOptions budget;
  double naive_cost = 0.2;
  std::size_t top_k = 1;
  std::string session_id = "session-1";
  PrivacyLevel privacy_level = PrivacyLevel::kConfidential;
  // Drives tool nonces and the DP noise streams.
  std::uint64_t seed = 0;
};

// What one CONTEXT_SHARE was built from. Stays on the privacy side; the
// harness uses it as ground truth.
struct ShareRecord {
  int turn = 0;
  std::vector<std::string> document_ids;
  std::vector<SanitizeResult> results;
};

struct SessionOutcome {
  SessionReport report;
  Trace trace;
  std::vector<ShareRecord> shares;
  std::string ledger_audit;
  // Every surface hidden at any point in the session.
  HiddenSet hidden;
  // Surfaces left in clear because they had already been shared.
  std::set<std::string> revealed;
};

// Drives one session over `peer`: HELLO/ACK, then per turn allocate,
// retrieve, sanitize, charge, CONTEXT_SHARE, answer TOOL_REQUESTs with local
// execution and proofs, and read the RESPONSE. Budget notifications go out
// at turn boundaries. Stops at the end of the script or when the budget is
// depleted. Errors: PeerUnavailable, ProtocolViolation.
absl::StatusOr<SessionOutcome> RunPrivacyAgent(const RetrievalIndex& index,
                                               const ScenarioScript& script,
                                               AllocationStrategy strategy,
                                               double epsilon_total, Transport& peer,
                                               const PrivacyAgentOptions& options = {});

// Convenience: runs against an in-process stub reasoning agent.
absl::StatusOr<SessionOutcome> RunWithStub(const RetrievalIndex& index,
                                           const ScenarioScript& script,
                                           AllocationStrategy strategy, double epsilon_total,
                                           const PrivacyAgentOptions& options = {});

}  // namespace splitagent

#endif  // SPLITAGENT_PRIVACY_AGENT_H_
