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

#ifndef SPLITAGENT_CORE_MODEL_H_
#define SPLITAGENT_CORE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace splitagent {

enum class TaskType {
  kContractReview,
  kCodeReview,
  kFinancialAnalysis,
  kCustomerSupport,
  kRiskAssessment,
  kComplianceCheck,
};

inline constexpr TaskType kAllTaskTypes[] = {
    TaskType::kContractReview,    TaskType::kCodeReview,
    TaskType::kFinancialAnalysis, TaskType::kCustomerSupport,
    TaskType::kRiskAssessment,    TaskType::kComplianceCheck,
};

enum class SourceClass { kContract, kCode, kFinancial, kSupport, kRisk, kCompliance };

inline constexpr SourceClass kAllSourceClasses[] = {
    SourceClass::kContract, SourceClass::kCode, SourceClass::kFinancial,
    SourceClass::kSupport,  SourceClass::kRisk, SourceClass::kCompliance,
};

enum class EntityKind {
  kPersonName,
  kOrgName,
  kMoneyAmount,
  kDate,
  kEmail,
  kPhone,
  kAccountId,
  kCredential,
  kUrl,
  kCodeIdentifier,
  kAddress,
  kPercentage,
};

inline constexpr EntityKind kAllEntityKinds[] = {
    EntityKind::kPersonName, EntityKind::kOrgName,    EntityKind::kMoneyAmount,
    EntityKind::kDate,       EntityKind::kEmail,      EntityKind::kPhone,
    EntityKind::kAccountId,  EntityKind::kCredential, EntityKind::kUrl,
    EntityKind::kCodeIdentifier, EntityKind::kAddress, EntityKind::kPercentage,
};

// Ordinal sensitivity scale; comparisons use the underlying integer.
enum class SensitivityLevel : int {
  kPublic = 0,
  kInternal = 1,
  kConfidential = 2,
  kRestricted = 3,
  kSecret = 4,
};

inline constexpr int kMaxSensitivity = 4;

inline int Ordinal(SensitivityLevel level) { return static_cast<int>(level); }
SensitivityLevel SensitivityFromOrdinal(int ordinal);  // clamps to [0, 4]

const char* TaskTypeName(TaskType task);  // "contract_review", ...
std::optional<TaskType> ParseTaskType(absl::string_view name);
const char* SourceClassName(SourceClass source);
std::optional<SourceClass> ParseSourceClass(absl::string_view name);
// The source class whose documents a task naturally operates on.
SourceClass SourceClassForTask(TaskType task);
TaskType TaskForSourceClass(SourceClass source);
const char* EntityKindName(EntityKind kind);  // "PersonName", ...
std::optional<EntityKind> ParseEntityKind(absl::string_view name);
const char* SensitivityName(SensitivityLevel level);
std::optional<SensitivityLevel> ParseSensitivity(absl::string_view name);

struct Document {
  std::string id;
  std::optional<TaskType> task_hint;
  std::string body;
  SourceClass source_class = SourceClass::kContract;

  friend bool operator==(const Document&, const Document&) = default;
};

// Byte offsets into a UTF-8 body, half open.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool Overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Entity {
  Span span;
  EntityKind kind = EntityKind::kPersonName;
  std::string surface;
  SensitivityLevel sensitivity = SensitivityLevel::kPublic;

  friend bool operator==(const Entity&, const Entity&) = default;
};

// Checks start < end <= body.size() and that surface equals the body slice.
bool EntityMatchesBody(const Entity& entity, absl::string_view body);

bool IsValidUtf8(absl::string_view text);

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;

  // epsilon >= 0 and delta in [0, 1).
  absl::Status Validate() const;
  // Additionally requires delta == 0, the only value the Laplace mechanism
  // supports.
  absl::Status ValidateForLaplace() const;
};

struct UtilityFeature {
  std::string extractor_id;
  double weight = 0.0;

  friend bool operator==(const UtilityFeature&, const UtilityFeature&) = default;
};

struct TaskProfile {
  TaskType task = TaskType::kContractReview;
  std::set<EntityKind> preserve_kinds;
  std::set<EntityKind> abstract_kinds;
  std::set<EntityKind> numeric_dp_fields;
  std::vector<UtilityFeature> utility_features;

  bool requires_dp() const { return !numeric_dp_fields.empty(); }
  friend bool operator==(const TaskProfile&, const TaskProfile&) = default;
};

// Returns every invariant violation; an empty list means the profile is valid.
std::vector<std::string> ValidateProfile(const TaskProfile& profile);

struct AbstractionToken {
  std::string label;

  friend bool operator==(const AbstractionToken&, const AbstractionToken&) = default;
};

// KIND_QUALIFIER, i.e. [A-Z]+_[A-Z0-9]+.
bool IsValidTokenLabel(absl::string_view label);

// Kind prefix used in token labels, e.g. OrgName -> "COMPANY".
const char* TokenPrefix(EntityKind kind);
std::optional<EntityKind> KindForTokenPrefix(absl::string_view prefix);

// Record of entity -> token substitutions for one document. Same surface and
// kind always maps to the same token; distinct surfaces of one kind never
// share a token.
class AbstractionMap {
 public:
  struct Entry {
    Entity entity;
    AbstractionToken token;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  AbstractionMap() = default;
  explicit AbstractionMap(TaskType task) : task_(task) {}

  TaskType task() const { return task_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::optional<AbstractionToken> TokenFor(EntityKind kind,
                                           absl::string_view surface) const;

  // Next letter ordinal for kinds that use A, B, C... qualifiers.
  int NextOrdinal(EntityKind kind) const;
  bool LabelInUse(absl::string_view label) const;

  // Records one occurrence. Fails if the token contradicts injectivity.
  absl::Status Add(const Entity& entity, const AbstractionToken& token);

  // Distinct labels in first-occurrence order.
  std::vector<std::string> Vocabulary() const;
  // Distinct surfaces in first-occurrence order.
  std::vector<std::string> Surfaces() const;

 private:
  TaskType task_ = TaskType::kContractReview;
  std::vector<Entry> entries_;
  std::map<std::pair<EntityKind, std::string>, AbstractionToken> by_surface_;
  std::map<std::string, std::pair<EntityKind, std::string>> by_label_;
  std::map<EntityKind, int> ordinals_;
};

struct UtilityScore {
  double value = 0.0;

  friend bool operator==(const UtilityScore&, const UtilityScore&) = default;
};

struct SanitizedDocument {
  std::string origin_id;
  std::string body;
  double epsilon_spent = 0.0;
  UtilityScore utility;

  friend bool operator==(const SanitizedDocument&, const SanitizedDocument&) = default;
};

// True when no surface in `surfaces` occurs in `text`.
bool IsLeakFree(absl::string_view text, const std::vector<std::string>& surfaces);

}  // namespace splitagent

#endif  // SPLITAGENT_CORE_MODEL_H_
