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

#ifndef SPLITAGENT_PRIVACY_SERVICE_H_
#define SPLITAGENT_PRIVACY_SERVICE_H_

// Enterprise-side service around the privacy agent. It owns the corpus and
// accepts session requests over HTTP on a local control port:
//
//   POST /session   {"script": <script text>, "strategy": "linear",
//                    "epsilon": 5.0, "reasoning": "host:port" | "",
//                    "session_id": "...", "seed": 0}
//   -> 200 {"report": <report text>, "trace": <trace text>}
//   -> 400 {"error": <error kind>, "message": "..."}
//
// An empty "reasoning" pairs the session with an in-process stub. The
// response only carries what the reasoning side saw plus the report; raw
// documents never leave the service.

#include <cstdint>
#include <memory>
#include <string>

#include "absl/status/statusor.h"
#include "splitagent/budget.h"
#include "splitagent/datagen.h"
#include "splitagent/privacy_agent.h"

namespace splitagent {

struct SessionRequest {
  std::string script;  // FormatScript text
  AllocationStrategy strategy = AllocationStrategy::kLinear;
  double epsilon = 1.0;
  std::string reasoning;  // host:port; empty for the in-process stub
  std::string session_id = "session-1";
  std::uint64_t seed = 0;
};

struct SessionResponse {
  std::string report;  // FormatReport text
  std::string trace;   // FormatTrace text
};

std::string SessionRequestToJson(const SessionRequest& request);
absl::StatusOr<SessionRequest> ParseSessionRequest(absl::string_view json);

// Runs one request against `index`. Errors from the script parser, the
// peer connection and the agent pass through.
absl::StatusOr<SessionResponse> HandleSessionRequest(const RetrievalIndex& index,
                                                     const SessionRequest& request,
                                                     const PrivacyAgentOptions& base);

class PrivacyService {
 public:
  PrivacyService(Corpus corpus, PrivacyAgentOptions options);
  ~PrivacyService();

  // Binds host:port (port 0 picks one) and returns the bound port.
  absl::StatusOr<int> Bind(const std::string& address);
  // Blocks until Stop().
  absl::Status Serve();
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Client side of POST /session. PeerUnavailable when the service cannot be
// reached; the service's error kind otherwise.
absl::StatusOr<SessionResponse> RequestSession(const std::string& address,
                                               const SessionRequest& request,
                                               int timeout_ms = 60000);

}  // namespace splitagent

#endif  // SPLITAGENT_PRIVACY_SERVICE_H_
