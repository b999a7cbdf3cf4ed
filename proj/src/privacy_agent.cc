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

#include "splitagent/privacy_agent.h"

#include <algorithm>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "splitagent/noise.h"
#include "splitagent/reasoning.h"
#include "splitagent/session.h"
#include "splitagent/status.h"
#include "splitagent/tools.h"

namespace splitagent {
namespace {

class Driver {
 public:
  Driver(Transport& peer, const PrivacyAgentOptions& options, SessionOutcome& out)
      : peer_(peer), options_(options), out_(out) {}

  absl::Status Send(Payload payload) {
    ProtocolMessage msg{options_.session_id, next_seq_++, std::move(payload)};
    const StepResult step = Step(session_, SessionEvent::Sent(msg));
    if (!step.accepted()) {
      return MakeError(ErrorKind::kProtocolViolation,
                       absl::StrCat("local session refused ", MessageTypeName(msg.type()), ": ",
                                    Detail(step)));
    }
    session_ = step.session;
    out_.trace.records.push_back({clock_++, WireDirection::kPrivacyToReasoning, msg});
    return peer_.Send(msg);
  }

  absl::StatusOr<ProtocolMessage> Receive() {
    SPLITAGENT_ASSIGN_OR_RETURN(ProtocolMessage msg, peer_.Receive());
    out_.trace.records.push_back({clock_++, WireDirection::kReasoningToPrivacy, msg});
    const StepResult step = Step(session_, SessionEvent::Received(msg));
    if (!step.accepted()) {
      return MakeError(ErrorKind::kProtocolViolation,
                       absl::StrCat("peer sent ", MessageTypeName(msg.type()), " in ",
                                    SessionStateName(session_.state), ": ", Detail(step)));
    }
    session_ = step.session;
    if (const auto* error = std::get_if<ErrorPayload>(&msg.payload)) {
      if (error->code == "ProtocolViolation") {
        return MakeError(ErrorKind::kProtocolViolation,
                         absl::StrCat("peer reported: ", error->message));
      }
    }
    return msg;
  }

  // Mirrors ledger state changes into the session and tells the peer.
  absl::Status SyncBudget(const BudgetLedger& ledger) {
    const BudgetState state = ledger.state();
    if (state == BudgetState::kBudgetLow && session_.state == SessionState::kActive) {
      session_ = Step(session_, SessionEvent::BudgetLow()).session;
    } else if (state == BudgetState::kDepleted && session_.state != SessionState::kDepleted &&
               session_.state != SessionState::kClosed) {
      session_ = Step(session_, SessionEvent::BudgetDepleted()).session;
    } else {
      return absl::OkStatus();
    }
    return Send(BudgetUpdatePayload{ledger.spent(), ledger.remaining(), BudgetStateName(state)});
  }

  void Close() { session_ = Step(session_, SessionEvent::Close()).session; }

 private:
  static std::string Detail(const StepResult& step) {
    return step.actions.empty() ? "rejected" : step.actions.front().detail;
  }

  Transport& peer_;
  const PrivacyAgentOptions& options_;
  SessionOutcome& out_;
  Session session_;
  std::uint64_t next_seq_ = 1;
  std::int64_t clock_ = 0;
};

// Replaces hidden surfaces in free text, longest first.
std::string Redact(const std::string& text, const std::map<std::string, std::string>& labels) {
  std::vector<std::pair<std::string, std::string>> order(labels.begin(), labels.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  std::string out = text;
  for (const auto& [surface, label] : order) out = absl::StrReplaceAll(out, {{surface, label}});
  return out;
}

std::string WithToolHint(const ScenarioTurn& turn) {
  if (turn.expected_tools.empty() || turn.instruction.find("[tools:") != std::string::npos) {
    return turn.instruction;
  }
  return absl::StrCat(turn.instruction, " [tools: ", absl::StrJoin(turn.expected_tools, ", "),
                      "]");
}

// Sanitizes under the session context. A surface the sanitizer would now
// hide but that already went out in clear is marked revealed and the
// document is redone, so no hidden surface ever appears in the wire log.
absl::StatusOr<SanitizeResult> SanitizeForSession(const Document& doc, TaskType task,
                                                  double epsilon, const SanitizerConfig& cfg,
                                                  SanitizeContext& context,
                                                  const std::string& wire) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    SPLITAGENT_ASSIGN_OR_RETURN(SanitizeResult result, Sanitize(doc, task, epsilon, cfg, context));
    bool exposed = false;
    for (const std::string& surface : result.HiddenSurfaces()) {
      if (!context.carried.count(surface) && wire.find(surface) != std::string::npos) {
        context.revealed.insert(surface);
        exposed = true;
      }
    }
    if (!exposed) return result;
  }
  return absl::InternalError(absl::StrCat("hiding decisions for ", doc.id, " did not settle"));
}

void Remember(const SanitizeResult& result, SanitizeContext& context,
              std::map<std::string, std::string>& labels) {
  for (const auto& entry : result.map.entries()) {
    context.carried.emplace(entry.entity.surface, entry.entity.kind);
    labels.emplace(entry.entity.surface, entry.token.label);
  }
  for (const Entity& e : result.noised) {
    context.carried.emplace(e.surface, e.kind);
    labels.emplace(e.surface, absl::StrCat(TokenPrefix(e.kind), "_HIDDEN"));
  }
}

}  // namespace

absl::StatusOr<SessionOutcome> RunPrivacyAgent(const RetrievalIndex& index,
                                               const ScenarioScript& script,
                                               AllocationStrategy strategy,
                                               double epsilon_total, Transport& peer,
                                               const PrivacyAgentOptions& options) {
  if (script.turns.empty()) return MakeError(ErrorKind::kSpecInvalid, "script has no turns");
  if (options.config.ProfileFor(script.task) == nullptr) {
    return MakeError(ErrorKind::kConfigInvalid,
                     absl::StrCat("no profile for ", TaskTypeName(script.task)));
  }
  SPLITAGENT_ASSIGN_OR_RETURN(BudgetLedger ledger,
                              BudgetLedger::Create(epsilon_total, options.budget));
  SessionOutcome out;
  out.report = {options.session_id, script.task, strategy, epsilon_total, {}};
  out.trace.meta = {{"session", options.session_id},
                    {"task", TaskTypeName(script.task)},
                    {"strategy", StrategyName(strategy)},
                    {"epsilon_total", absl::StrCat(epsilon_total)}};
  Driver driver(peer, options, out);

  SPLITAGENT_RETURN_IF_ERROR(
      driver.Send(HelloPayload{script.task, options.privacy_level, epsilon_total}));
  SPLITAGENT_ASSIGN_OR_RETURN(const ProtocolMessage ack, driver.Receive());
  if (ack.type() != MessageType::kAck) {
    return MakeError(ErrorKind::kProtocolViolation, "handshake not acknowledged");
  }
  SPLITAGENT_RETURN_IF_ERROR(driver.SyncBudget(ledger));

  ToolRegistry tools = DefaultToolRegistry(options.config, DeriveSeed(options.seed, "tools"));
  const AllocationParams params{epsilon_total, options.naive_cost,
                                options.budget.min_chargeable};
  std::map<std::string, std::string> labels;  // hidden surface -> replacement
  SanitizeContext context;
  std::string wire;  // everything shared in clear so far
  const int total_turns = static_cast<int>(script.turns.size());

  for (int t = 0; t < total_turns; ++t) {
    const ScenarioTurn& turn = script.turns[t];
    TurnReport row;
    row.turn = t;
    auto finish_row = [&] {
      row.budget_state = ledger.state();
      out.report.turns.push_back(row);
    };
    if (ledger.state() == BudgetState::kDepleted) {
      finish_row();
      continue;
    }
    const double proposal =
        Allocate(strategy, t, total_turns, ledger.remaining(), turn.importance, params);
    row.epsilon_allocated = ledger.ClampToRemaining(proposal);
    if (row.epsilon_allocated < options.budget.min_chargeable) {
      finish_row();
      continue;
    }

    std::vector<const Document*> docs;
    if (!turn.document_id.empty()) {
      if (const Document* d = index.Find(turn.document_id)) docs.push_back(d);
    } else {
      for (const SearchHit& hit : index.Search(turn.instruction, options.top_k)) {
        docs.push_back(index.Find(hit.document_id));
      }
    }
    if (docs.empty()) {
      finish_row();
      continue;
    }

    ShareRecord record;
    record.turn = t;
    SanitizerConfig cfg = options.config;
    cfg.rng_seed = DeriveSeed(options.seed, static_cast<std::uint64_t>(t));
    const double per_doc = row.epsilon_allocated / static_cast<double>(docs.size());
    ContextSharePayload share;
    std::vector<std::string> bodies;
    std::set<std::string> vocab_seen;
    std::string raw_input;
    double utility_sum = 0.0;
    for (const Document* doc : docs) {
      SPLITAGENT_ASSIGN_OR_RETURN(SanitizeResult result,
                                  SanitizeForSession(*doc, script.task, per_doc, cfg, context, wire));
      SPLITAGENT_RETURN_IF_ERROR(ledger.Charge(absl::StrCat("t", t, ":", doc->id),
                                               result.document.epsilon_spent, t, t));
      row.epsilon_charged += result.document.epsilon_spent;
      utility_sum += result.document.utility.value;
      Remember(result, context, labels);
      for (const std::string& label : result.map.Vocabulary()) {
        if (vocab_seen.insert(label).second) share.abstraction_vocab.push_back(label);
      }
      bodies.push_back(result.document.body);
      if (!raw_input.empty()) raw_input += "\n\n";
      raw_input += doc->body;
      record.document_ids.push_back(doc->id);
      record.results.push_back(std::move(result));
    }
    row.document_id = absl::StrJoin(record.document_ids, "+");
    row.utility = utility_sum / static_cast<double>(docs.size());
    share.sanitized_data = absl::StrJoin(bodies, "\n\n");
    share.privacy_cost = row.epsilon_charged;
    share.utility_preserved = std::clamp(row.utility, 0.0, 1.0);

    // Free text from the user: reuse the session's tokens, then hide
    // anything else the extractor finds at the strictest threshold.
    const Document instruction{absl::StrCat("instruction-", t), std::nullopt,
                               Redact(WithToolHint(turn), labels), SourceClassForTask(script.task)};
    SPLITAGENT_ASSIGN_OR_RETURN(SanitizeResult instruction_result,
                                SanitizeForSession(instruction, script.task, 0.0, cfg, context,
                                                   wire));
    Remember(instruction_result, context, labels);
    share.instruction = instruction_result.document.body;

    std::vector<std::string> hidden_surfaces;
    for (const auto& [surface, kind] : context.carried) hidden_surfaces.push_back(surface);
    if (!IsLeakFree(share.sanitized_data, hidden_surfaces) ||
        !IsLeakFree(share.instruction, hidden_surfaces)) {
      return absl::InternalError(absl::StrCat("turn ", t, " share would reveal a hidden surface"));
    }
    absl::StrAppend(&wire, share.sanitized_data, "\n", share.instruction, "\n");
    out.shares.push_back(std::move(record));
    SPLITAGENT_RETURN_IF_ERROR(driver.Send(std::move(share)));

    std::set<std::string> executed;
    bool responded = false;
    while (!responded) {
      SPLITAGENT_ASSIGN_OR_RETURN(const ProtocolMessage msg, driver.Receive());
      if (const auto* request = std::get_if<ToolRequestPayload>(&msg.payload)) {
        auto exec = tools.Execute(request->tool_id, raw_input);
        if (exec.ok()) {
          ++row.tool_calls;
          executed.insert(request->tool_id);
          SPLITAGENT_RETURN_IF_ERROR(
              driver.Send(ToolResultPayload{request->request_id, exec->proof}));
        } else {
          SPLITAGENT_RETURN_IF_ERROR(driver.Send(ErrorPayload{
              ErrorKindName(ErrorKindOf(exec.status()).value_or(ErrorKind::kUnknownTool)),
              request->request_id}));
        }
      } else if (msg.type() == MessageType::kResponse) {
        responded = true;
      } else if (msg.type() == MessageType::kError) {
        break;  // backend failure: turn not completed
      } else {
        return MakeError(ErrorKind::kProtocolViolation,
                         absl::StrCat("unexpected ", MessageTypeName(msg.type()), " mid-turn"));
      }
    }
    row.completed = responded && std::all_of(turn.expected_tools.begin(),
                                             turn.expected_tools.end(),
                                             [&](const std::string& id) {
                                               return executed.count(id) > 0;
                                             });
    SPLITAGENT_RETURN_IF_ERROR(driver.SyncBudget(ledger));
    finish_row();
  }
  driver.Close();
  out.ledger_audit = ledger.AuditLog();
  out.hidden = std::move(context.carried);
  out.revealed = std::move(context.revealed);
  return out;
}

absl::StatusOr<SessionOutcome> RunWithStub(const RetrievalIndex& index,
                                           const ScenarioScript& script,
                                           AllocationStrategy strategy, double epsilon_total,
                                           const PrivacyAgentOptions& options) {
  auto backend = MakeStubBackend();
  ReasoningAgent agent(*backend);
  LoopbackTransport transport(agent);
  return RunPrivacyAgent(index, script, strategy, epsilon_total, transport, options);
}

}  // namespace splitagent
