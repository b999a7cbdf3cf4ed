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

#ifndef SPLITAGENT_ADVERSARY_H_
#define SPLITAGENT_ADVERSARY_H_

// Honest-but-curious attacks on captured traces. An attack sees only the
// traces, the side info and the public mechanism parameters (buckets, noise
// sensitivities). Ground truth is handed to the scorer separately and never
// reaches the guessing code.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/config.h"
#include "splitagent/core_model.h"
#include "splitagent/datagen.h"
#include "splitagent/trace.h"

namespace splitagent {

enum class AttackType { kReconstruction, kInference, kLinkability };

inline constexpr AttackType kAllAttacks[] = {AttackType::kReconstruction, AttackType::kInference,
                                             AttackType::kLinkability};

const char* AttackTypeName(AttackType attack);  // "reconstruction", ...
std::optional<AttackType> ParseAttackType(absl::string_view name);

using NamedTraces = std::vector<std::pair<std::string, Trace>>;
using TracePair = std::pair<std::string, std::string>;

struct AttackSetup {
  AttackType attack = AttackType::kReconstruction;
  SideInfo side_info;
  NamedTraces traces;
  std::uint64_t rng_seed = 0;
  // Public mechanism parameters.
  SanitizerConfig config = DefaultSanitizerConfig();
  // Money edges for the inference target. Empty means DefaultFineEdges.
  std::vector<double> amount_fine_edges;
  // Linkability: pairs to judge. Empty means every pair.
  std::vector<TracePair> pairs;
};

// One template slot in a shared line: trace, CONTEXT_SHARE index, line
// within the share's sanitized text, slot within the template.
struct SlotKey {
  std::string trace;
  int share = 0;
  int line = 0;
  int slot = 0;

  friend auto operator<=>(const SlotKey&, const SlotKey&) = default;
};

std::string FormatSlotKey(const SlotKey& key);  // "trace/share/line/slot"

struct SlotGuess {
  SlotKey key;
  EntityKind kind = EntityKind::kPersonName;
  // A surface for reconstruction, a HiddenAttribute value for inference.
  std::string guess;
};

struct LinkGuess {
  TracePair pair;
  bool same = false;
};

// Evaluator-only knowledge.
struct GroundTruth {
  std::map<SlotKey, Entity> slots;
  std::map<TracePair, bool> same_source;
};

struct AttackTrial {
  std::string target;
  std::string guess;
  std::string truth;
  bool success = false;
};

struct AttackReport {
  AttackType attack = AttackType::kReconstruction;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;  // successes / trials, 0 when there are none
  std::optional<double> baseline;  // random guessing, where defined
  std::vector<AttackTrial> log;
};

// Quarter edges inside every amount bucket; the open top bucket is capped at
// ten times its lower edge. Yields 12 classes for the default buckets.
std::vector<double> DefaultFineEdges(const SanitizerConfig& cfg);

// The categorical attribute the inference attack targets: "fine:<i>" for
// money, "month:<m>" for dates, the id prefix for account ids. nullopt for
// other kinds or unparsable surfaces.
std::optional<std::string> HiddenAttribute(EntityKind kind, absl::string_view surface,
                                           const std::vector<double>& fine_edges);

// Guessing stages. EmptyTrace when no trace carries a CONTEXT_SHARE.
absl::StatusOr<std::vector<SlotGuess>> ReconstructionGuesses(const AttackSetup& setup);
absl::StatusOr<std::vector<SlotGuess>> InferenceGuesses(const AttackSetup& setup);
// FewerThanTwoTraces with fewer than two traces.
absl::StatusOr<std::vector<LinkGuess>> LinkabilityGuesses(const AttackSetup& setup);

// Guess, then score against `truth`. Reconstruction counts every truth slot
// of the given traces; a slot without a guess is a failure.
absl::StatusOr<AttackReport> RunAttack(const AttackSetup& setup, const GroundTruth& truth);

// One row per trial (target, guess, truth, 0/1) and summary lines.
std::string FormatAttackReport(const AttackReport& report);

// Truth files next to the traces: <name>.truth holds the slot table of one
// trace, links.truth the same/different labels.
absl::Status WriteGroundTruth(const std::string& dir, const GroundTruth& truth);
absl::StatusOr<GroundTruth> ReadGroundTruth(const std::string& dir);

}  // namespace splitagent

#endif  // SPLITAGENT_ADVERSARY_H_
