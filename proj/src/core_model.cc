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

#include "splitagent/core_model.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

template <typename E>
struct NameEntry {
  E value;
  const char* name;
};

constexpr std::array<NameEntry<TaskType>, 6> kTaskNames = {{
    {TaskType::kContractReview, "contract_review"},
    {TaskType::kCodeReview, "code_review"},
    {TaskType::kFinancialAnalysis, "financial_analysis"},
    {TaskType::kCustomerSupport, "customer_support"},
    {TaskType::kRiskAssessment, "risk_assessment"},
    {TaskType::kComplianceCheck, "compliance_check"},
}};

constexpr std::array<NameEntry<SourceClass>, 6> kSourceNames = {{
    {SourceClass::kContract, "contract"},
    {SourceClass::kCode, "code"},
    {SourceClass::kFinancial, "financial"},
    {SourceClass::kSupport, "support"},
    {SourceClass::kRisk, "risk"},
    {SourceClass::kCompliance, "compliance"},
}};

constexpr std::array<NameEntry<EntityKind>, 12> kKindNames = {{
    {EntityKind::kPersonName, "PersonName"},
    {EntityKind::kOrgName, "OrgName"},
    {EntityKind::kMoneyAmount, "MoneyAmount"},
    {EntityKind::kDate, "Date"},
    {EntityKind::kEmail, "Email"},
    {EntityKind::kPhone, "Phone"},
    {EntityKind::kAccountId, "AccountId"},
    {EntityKind::kCredential, "Credential"},
    {EntityKind::kUrl, "Url"},
    {EntityKind::kCodeIdentifier, "CodeIdentifier"},
    {EntityKind::kAddress, "Address"},
    {EntityKind::kPercentage, "Percentage"},
}};

constexpr std::array<NameEntry<EntityKind>, 12> kTokenPrefixes = {{
    {EntityKind::kPersonName, "PERSON"},
    {EntityKind::kOrgName, "COMPANY"},
    {EntityKind::kMoneyAmount, "AMOUNT"},
    {EntityKind::kDate, "DATE"},
    {EntityKind::kEmail, "EMAIL"},
    {EntityKind::kPhone, "PHONE"},
    {EntityKind::kAccountId, "ACCOUNT"},
    {EntityKind::kCredential, "CREDENTIAL"},
    {EntityKind::kUrl, "URL"},
    {EntityKind::kCodeIdentifier, "IDENT"},
    {EntityKind::kAddress, "ADDRESS"},
    {EntityKind::kPercentage, "PERCENT"},
}};

constexpr std::array<NameEntry<SensitivityLevel>, 5> kLevelNames = {{
    {SensitivityLevel::kPublic, "Public"},
    {SensitivityLevel::kInternal, "Internal"},
    {SensitivityLevel::kConfidential, "Confidential"},
    {SensitivityLevel::kRestricted, "Restricted"},
    {SensitivityLevel::kSecret, "Secret"},
}};

template <typename E, std::size_t N>
const char* NameOf(const std::array<NameEntry<E>, N>& table, E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> ValueOf(const std::array<NameEntry<E>, N>& table,
                         absl::string_view name) {
  for (const auto& entry : table) {
    if (entry.name == name) return entry.value;
  }
  return std::nullopt;
}

}  // namespace

SensitivityLevel SensitivityFromOrdinal(int ordinal) {
  return static_cast<SensitivityLevel>(std::clamp(ordinal, 0, kMaxSensitivity));
}

const char* TaskTypeName(TaskType task) { return NameOf(kTaskNames, task); }
std::optional<TaskType> ParseTaskType(absl::string_view name) {
  return ValueOf(kTaskNames, name);
}
const char* SourceClassName(SourceClass source) {
  return NameOf(kSourceNames, source);
}
std::optional<SourceClass> ParseSourceClass(absl::string_view name) {
  return ValueOf(kSourceNames, name);
}
const char* EntityKindName(EntityKind kind) { return NameOf(kKindNames, kind); }
std::optional<EntityKind> ParseEntityKind(absl::string_view name) {
  return ValueOf(kKindNames, name);
}
const char* SensitivityName(SensitivityLevel level) {
  return NameOf(kLevelNames, level);
}
std::optional<SensitivityLevel> ParseSensitivity(absl::string_view name) {
  return ValueOf(kLevelNames, name);
}
const char* TokenPrefix(EntityKind kind) { return NameOf(kTokenPrefixes, kind); }
std::optional<EntityKind> KindForTokenPrefix(absl::string_view prefix) {
  return ValueOf(kTokenPrefixes, prefix);
}

SourceClass SourceClassForTask(TaskType task) {
  return kAllSourceClasses[static_cast<int>(task)];
}

TaskType TaskForSourceClass(SourceClass source) {
  return kAllTaskTypes[static_cast<int>(source)];
}

bool EntityMatchesBody(const Entity& entity, absl::string_view body) {
  if (entity.span.start >= entity.span.end) return false;
  if (entity.span.end > body.size()) return false;
  return body.substr(entity.span.start, entity.span.length()) == entity.surface;
}

bool IsValidUtf8(absl::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      cp = lead & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

absl::Status PrivacyParams::Validate() const {
  if (!(epsilon >= 0.0) || std::isinf(epsilon)) {
    return MakeError(ErrorKind::kConfigInvalid,
                     absl::StrCat("epsilon must be finite and >= 0, got ", epsilon));
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return MakeError(ErrorKind::kConfigInvalid,
                     absl::StrCat("delta must lie in [0, 1), got ", delta));
  }
  return absl::OkStatus();
}

absl::Status PrivacyParams::ValidateForLaplace() const {
  SPLITAGENT_RETURN_IF_ERROR(Validate());
  if (delta != 0.0) {
    return MakeError(ErrorKind::kConfigInvalid,
                     absl::StrCat("the Laplace mechanism requires delta = 0, got ",
                                  delta));
  }
  return absl::OkStatus();
}

std::vector<std::string> ValidateProfile(const TaskProfile& profile) {
  std::vector<std::string> violations;
  for (EntityKind kind : profile.preserve_kinds) {
    if (profile.abstract_kinds.count(kind) > 0) {
      violations.push_back(absl::StrCat("overlap: ", EntityKindName(kind),
                                        " is both preserved and abstracted"));
    }
  }
  double sum = 0.0;
  for (const UtilityFeature& feature : profile.utility_features) {
    if (!(feature.weight >= 0.0 && feature.weight <= 1.0)) {
      violations.push_back(absl::StrCat("weight out of [0,1] for feature ",
                                        feature.extractor_id));
    }
    sum += feature.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    violations.push_back(absl::StrFormat("weights sum %g != 1", sum));
  }
  return violations;
}

bool IsValidTokenLabel(absl::string_view label) {
  const std::size_t underscore = label.find('_');
  if (underscore == absl::string_view::npos || underscore == 0 ||
      underscore + 1 == label.size()) {
    return false;
  }
  for (std::size_t i = 0; i < underscore; ++i) {
    if (label[i] < 'A' || label[i] > 'Z') return false;
  }
  for (std::size_t i = underscore + 1; i < label.size(); ++i) {
    const char c = label[i];
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

std::optional<AbstractionToken> AbstractionMap::TokenFor(
    EntityKind kind, absl::string_view surface) const {
  auto it = by_surface_.find({kind, std::string(surface)});
  if (it == by_surface_.end()) return std::nullopt;
  return it->second;
}

int AbstractionMap::NextOrdinal(EntityKind kind) const {
  auto it = ordinals_.find(kind);
  return it == ordinals_.end() ? 0 : it->second;
}

bool AbstractionMap::LabelInUse(absl::string_view label) const {
  return by_label_.count(std::string(label)) > 0;
}

absl::Status AbstractionMap::Add(const Entity& entity,
                                 const AbstractionToken& token) {
  if (!IsValidTokenLabel(token.label)) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed token label '", token.label, "'"));
  }
  const auto key = std::make_pair(entity.kind, entity.surface);
  auto existing = by_surface_.find(key);
  if (existing != by_surface_.end()) {
    if (existing->second.label != token.label) {
      return absl::InvalidArgumentError(absl::StrCat(
          "surface already mapped to ", existing->second.label));
    }
    entries_.push_back({entity, token});
    return absl::OkStatus();
  }
  if (by_label_.count(token.label) > 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("label ", token.label, " already used by another surface"));
  }
  by_surface_.emplace(key, token);
  by_label_.emplace(token.label, key);
  ++ordinals_[entity.kind];
  entries_.push_back({entity, token});
  return absl::OkStatus();
}

std::vector<std::string> AbstractionMap::Vocabulary() const {
  std::vector<std::string> vocab;
  std::set<std::string> seen;
  for (const Entry& entry : entries_) {
    if (seen.insert(entry.token.label).second) vocab.push_back(entry.token.label);
  }
  return vocab;
}

std::vector<std::string> AbstractionMap::Surfaces() const {
  std::vector<std::string> surfaces;
  std::set<std::string> seen;
  for (const Entry& entry : entries_) {
    if (seen.insert(entry.entity.surface).second) {
      surfaces.push_back(entry.entity.surface);
    }
  }
  return surfaces;
}

bool IsLeakFree(absl::string_view text, const std::vector<std::string>& surfaces) {
  return std::none_of(surfaces.begin(), surfaces.end(), [&](const std::string& s) {
    return !s.empty() && text.find(s) != absl::string_view::npos;
  });
}

}  // namespace splitagent
