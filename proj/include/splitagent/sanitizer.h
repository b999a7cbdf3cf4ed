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

#ifndef SPLITAGENT_SANITIZER_H_
#define SPLITAGENT_SANITIZER_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/config.h"
#include "splitagent/core_model.h"
#include "splitagent/noise.h"

namespace splitagent {

// Non-overlapping entities sorted by start. Overlaps resolve to the longest
// match; equal lengths go to the earlier rule. `sensitivity` carries the
// rule's base level.
std::vector<Entity> ExtractEntities(const Document& doc, const Ruleset& rules);

// Base level +1 (capped) for abstract_kinds, unchanged otherwise.
SensitivityLevel SensitivityOf(const Entity& e, const TaskProfile& profile);

// Entities strictly above the returned level are abstracted.
SensitivityLevel PrivacyThreshold(double epsilon, const SanitizerConfig& cfg);

// Parses "$150,000", "$2.5 million", "12.5%". Nullopt for other kinds or
// unparseable text.
std::optional<double> ParseNumericValue(EntityKind kind, absl::string_view surface);

// Month 1..12 of a date surface, if recognisable.
std::optional<int> ParseMonth(absl::string_view surface);

// Label of the first bucket whose upper bound exceeds `value`.
const std::string& BucketLabel(const std::vector<BucketBound>& buckets, double value);

// Token for `e`, reusing the existing token for a repeated surface. Records
// the new pair in `map`. Names get A, B, ... in first-occurrence order;
// amounts and percentages their bucket; dates their quarter. A second
// distinct surface in an already used bucket or quarter gets a letter suffix
// (AMOUNT_LARGEB) so the map stays injective.
AbstractionToken GenerateAbstraction(const Entity& e, const TaskProfile& profile,
                                     AbstractionMap& map, const SanitizerConfig& cfg);

// Replaces every mapped span right to left. Fails with OverlappingSpans.
absl::StatusOr<std::string> ApplyAbstractions(const Document& doc,
                                              const AbstractionMap& map);

// Replaces each field (spans into `text`) by the bucket label of its value
// plus Laplace(0, sensitivity/epsilon) noise, e.g. AMOUNT_SMALL.
absl::StatusOr<std::string> AddDpNoise(absl::string_view text,
                                       const std::vector<Entity>& numeric_fields,
                                       double epsilon, const SanitizerConfig& cfg,
                                       Rng& rng);

struct SanitizeResult {
  SanitizedDocument document;
  AbstractionMap map;
  // Everything the extractor found in the original body.
  std::vector<Entity> entities;
  // Numeric entities released only as noisy bucket labels.
  std::vector<Entity> noised;
  // OK, or UtilityBelowThreshold when utility < tau. The artifact is valid
  // either way.
  absl::Status utility_status;

  // Surfaces that must never appear downstream: mapped and noised ones.
  std::vector<std::string> HiddenSurfaces() const;
};

// Surface -> kind of everything hidden earlier in a session.
using HiddenSet = std::map<std::string, EntityKind>;

// What a session has already decided. Carried surfaces are abstracted
// whatever the threshold, so a later turn with more budget cannot reveal what
// an earlier turn hid. Revealed surfaces already crossed the wire in clear
// and are left alone, since hiding them now protects nothing.
struct SanitizeContext {
  HiddenSet carried;
  std::set<std::string> revealed;
};

// Extract, threshold, abstract, apply and add noise as the task profile and
// the configured policy require. Hard errors (unknown profile, invalid
// epsilon) come back as a status.
absl::StatusOr<SanitizeResult> Sanitize(const Document& doc, TaskType task, double epsilon,
                                        const SanitizerConfig& cfg,
                                        const SanitizeContext& context = {});

}  // namespace splitagent

#endif  // SPLITAGENT_SANITIZER_H_
