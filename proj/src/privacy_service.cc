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

#include "splitagent/privacy_service.h"

#include <chrono>
#include <mutex>
#include <utility>

#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"
#include "splitagent/retrieval.h"
#include "splitagent/scenario.h"
#include "splitagent/status.h"
#include "splitagent/trace.h"
#include "splitagent/transport.h"

namespace splitagent {
namespace {

using nlohmann::json;

std::optional<ErrorKind> ErrorKindByName(absl::string_view name) {
  for (int k = 0; k <= static_cast<int>(ErrorKind::kIoFailure); ++k) {
    if (name == ErrorKindName(static_cast<ErrorKind>(k))) return static_cast<ErrorKind>(k);
  }
  return std::nullopt;
}

json ErrorJson(const absl::Status& status) {
  const auto kind = ErrorKindOf(status);
  return {{"error", kind ? ErrorKindName(*kind) : "Internal"},
          {"message", std::string(status.message())}};
}

}  // namespace

std::string SessionRequestToJson(const SessionRequest& request) {
  return json{{"script", request.script},
              {"strategy", StrategyName(request.strategy)},
              {"epsilon", request.epsilon},
              {"reasoning", request.reasoning},
              {"session_id", request.session_id},
              {"seed", request.seed}}
      .dump();
}

absl::StatusOr<SessionRequest> ParseSessionRequest(absl::string_view text) {
  try {
    const json j = json::parse(text);
    SessionRequest r;
    r.script = j.at("script").get<std::string>();
    const auto strategy = ParseStrategy(j.value("strategy", std::string("linear")));
    if (!strategy) return MakeError(ErrorKind::kSpecInvalid, "unknown strategy");
    r.strategy = *strategy;
    r.epsilon = j.at("epsilon").get<double>();
    r.reasoning = j.value("reasoning", std::string());
    r.session_id = j.value("session_id", r.session_id);
    r.seed = j.value("seed", std::uint64_t{0});
    return r;
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kSchemaViolation, absl::StrCat("bad session request: ", e.what()));
  }
}

absl::StatusOr<SessionResponse> HandleSessionRequest(const RetrievalIndex& index,
                                                     const SessionRequest& request,
                                                     const PrivacyAgentOptions& base) {
  SPLITAGENT_ASSIGN_OR_RETURN(const ScenarioScript script, ParseScript(request.script));
  PrivacyAgentOptions options = base;
  options.session_id = request.session_id;
  options.seed = request.seed;
  SessionOutcome outcome;
  if (request.reasoning.empty()) {
    SPLITAGENT_ASSIGN_OR_RETURN(
        outcome, RunWithStub(index, script, request.strategy, request.epsilon, options));
  } else {
    SPLITAGENT_ASSIGN_OR_RETURN(auto peer, TcpTransport::Connect(request.reasoning));
    SPLITAGENT_ASSIGN_OR_RETURN(outcome, RunPrivacyAgent(index, script, request.strategy,
                                                         request.epsilon, *peer, options));
  }
  SessionResponse response;
  response.report = FormatReport(outcome.report);
  SPLITAGENT_ASSIGN_OR_RETURN(response.trace, FormatTrace(outcome.trace));
  return response;
}

struct PrivacyService::Impl {
  Corpus corpus;
  RetrievalIndex index;
  PrivacyAgentOptions options;
  httplib::Server server;
  std::mutex mu;  // one session at a time

  Impl(Corpus c, PrivacyAgentOptions o)
      : corpus(std::move(c)), index(corpus.documents), options(std::move(o)) {}
};

PrivacyService::PrivacyService(Corpus corpus, PrivacyAgentOptions options)
    : impl_(std::make_unique<Impl>(std::move(corpus), std::move(options))) {
  impl_->server.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto request = ParseSessionRequest(req.body);
    absl::StatusOr<SessionResponse> response =
        request.ok() ? HandleSessionRequest(impl_->index, *request, impl_->options)
                     : absl::StatusOr<SessionResponse>(request.status());
    if (!response.ok()) {
      res.status = 400;
      res.set_content(ErrorJson(response.status()).dump(), "application/json");
      return;
    }
    res.set_content(json{{"report", response->report}, {"trace", response->trace}}.dump(),
                    "application/json");
  });
}

PrivacyService::~PrivacyService() { Stop(); }

absl::StatusOr<int> PrivacyService::Bind(const std::string& address) {
  SPLITAGENT_ASSIGN_OR_RETURN(const auto host_port, SplitHostPort(address));
  const auto& [host, port] = host_port;
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot bind ", address));
  return bound;
}

absl::Status PrivacyService::Serve() {
  if (!impl_->server.listen_after_bind()) {
    return MakeError(ErrorKind::kIoFailure, "privacy service stopped with an error");
  }
  return absl::OkStatus();
}

void PrivacyService::Stop() { impl_->server.stop(); }

absl::StatusOr<SessionResponse> RequestSession(const std::string& address,
                                               const SessionRequest& request, int timeout_ms) {
  SPLITAGENT_ASSIGN_OR_RETURN(const auto host_port, SplitHostPort(address));
  httplib::Client client(host_port.first, host_port.second);
  const auto timeout = std::chrono::milliseconds(timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto result = client.Post("/session", SessionRequestToJson(request), "application/json");
  if (!result) {
    return MakeError(ErrorKind::kPeerUnavailable,
                     absl::StrCat("privacy service ", address, " unreachable"));
  }
  try {
    const json j = json::parse(result->body);
    if (result->status != 200) {
      const auto kind = ErrorKindByName(j.value("error", std::string()));
      const std::string message = j.value("message", std::string("request failed"));
      if (kind) return MakeError(*kind, message);
      return absl::InternalError(message);
    }
    return SessionResponse{j.at("report").get<std::string>(), j.at("trace").get<std::string>()};
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kSchemaViolation, absl::StrCat("bad service reply: ", e.what()));
  }
}

}  // namespace splitagent
