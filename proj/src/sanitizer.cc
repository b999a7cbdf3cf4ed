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

#include "splitagent/sanitizer.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/strip.h"
#include "splitagent/gazetteers.h"
#include "splitagent/status.h"
#include "splitagent/utility.h"

namespace splitagent {
namespace {

struct Candidate {
  Span span;
  std::size_t rule;
};

// 0 -> A, 25 -> Z, 26 -> AA.
std::string Letters(int ordinal) {
  std::string out;
  int n = ordinal + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return out;
}

bool Overlaps(const std::map<std::size_t, std::size_t>& taken, const Span& span) {
  auto it = taken.lower_bound(span.start);
  if (it != taken.end() && it->first < span.end) return true;
  if (it != taken.begin()) {
    --it;
    if (it->second > span.start) return true;
  }
  return false;
}

}  // namespace

std::vector<Entity> ExtractEntities(const Document& doc, const Ruleset& rules) {
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (const Span& span : rules.Matches(i, doc.body)) candidates.push_back({span, i});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.span.length() != b.span.length()) {
                       return a.span.length() > b.span.length();
                     }
                     if (a.rule != b.rule) return a.rule < b.rule;
                     return a.span.start < b.span.start;
                   });
  std::map<std::size_t, std::size_t> taken;
  std::vector<Entity> entities;
  for (const Candidate& c : candidates) {
    if (Overlaps(taken, c.span)) continue;
    taken.emplace(c.span.start, c.span.end);
    const ExtractionRule& rule = rules.rules()[c.rule];
    entities.push_back({c.span, rule.kind,
                        std::string(doc.body.substr(c.span.start, c.span.length())),
                        rule.base_sensitivity});
  }
  std::sort(entities.begin(), entities.end(), [](const Entity& a, const Entity& b) {
    return a.span.start < b.span.start;
  });
  return entities;
}

SensitivityLevel SensitivityOf(const Entity& e, const TaskProfile& profile) {
  if (profile.preserve_kinds.count(e.kind) > 0) return e.sensitivity;
  if (profile.abstract_kinds.count(e.kind) > 0) {
    return SensitivityFromOrdinal(Ordinal(e.sensitivity) + 1);
  }
  return e.sensitivity;
}

SensitivityLevel PrivacyThreshold(double epsilon, const SanitizerConfig& cfg) {
  for (const ThresholdStep& step : cfg.threshold_table) {
    if (epsilon < step.epsilon_below) return step.level;
  }
  return cfg.threshold_table.empty() ? SensitivityLevel::kPublic
                                     : cfg.threshold_table.back().level;
}

std::optional<double> ParseNumericValue(EntityKind kind, absl::string_view surface) {
  double multiplier = 1.0;
  if (kind == EntityKind::kMoneyAmount) {
    if (!absl::ConsumePrefix(&surface, "$")) return std::nullopt;
    if (absl::ConsumeSuffix(&surface, " million")) multiplier = 1e6;
    if (absl::ConsumeSuffix(&surface, " billion")) multiplier = 1e9;
  } else if (kind == EntityKind::kPercentage) {
    if (!absl::ConsumeSuffix(&surface, "%")) return std::nullopt;
  } else {
    return std::nullopt;
  }
  const std::string digits = absl::StrReplaceAll(surface, {{",", ""}});
  double value = 0.0;
  if (!absl::SimpleAtod(digits, &value) || !std::isfinite(value)) return std::nullopt;
  return value * multiplier;
}

std::optional<int> ParseMonth(absl::string_view surface) {
  const auto& months = MonthNames();
  for (int m = 0; m < 12; ++m) {
    if (absl::StartsWith(surface, absl::string_view(months[m]).substr(0, 3))) {
      return m + 1;
    }
  }
  int month = 0;
  if (surface.size() == 10 && surface[4] == '-' && surface[7] == '-') {
    if (absl::SimpleAtoi(surface.substr(5, 2), &month)) return month;
    return std::nullopt;
  }
  const std::size_t slash = surface.find('/');
  if (slash != absl::string_view::npos &&
      absl::SimpleAtoi(surface.substr(0, slash), &month) && month >= 1 && month <= 12) {
    return month;
  }
  return std::nullopt;
}

const std::string& BucketLabel(const std::vector<BucketBound>& buckets, double value) {
  for (const BucketBound& bucket : buckets) {
    if (value < bucket.upper_bound) return bucket.label;
  }
  return buckets.back().label;
}

AbstractionToken GenerateAbstraction(const Entity& e, const TaskProfile& profile,
                                     AbstractionMap& map, const SanitizerConfig& cfg) {
  (void)profile;
  if (std::optional<AbstractionToken> existing = map.TokenFor(e.kind, e.surface)) {
    map.Add(e, *existing).IgnoreError();
    return *existing;
  }
  const std::string prefix = absl::StrCat(TokenPrefix(e.kind), "_");
  std::string qualifier;
  if (e.kind == EntityKind::kMoneyAmount || e.kind == EntityKind::kPercentage) {
    if (std::optional<double> v = ParseNumericValue(e.kind, e.surface)) {
      qualifier = BucketLabel(e.kind == EntityKind::kMoneyAmount ? cfg.amount_buckets
                                                                 : cfg.percent_buckets,
                              *v);
    }
  } else if (e.kind == EntityKind::kDate) {
    if (std::optional<int> month = ParseMonth(e.surface)) {
      qualifier = absl::StrCat("Q", (*month - 1) / 3 + 1);
    }
  }
  std::string label;
  if (!qualifier.empty()) {
    label = prefix + qualifier;
    for (int suffix = 1; map.LabelInUse(label); ++suffix) {
      label = absl::StrCat(prefix, qualifier, Letters(suffix));
    }
  } else {
    for (int ordinal = map.NextOrdinal(e.kind);; ++ordinal) {
      label = prefix + Letters(ordinal);
      if (!map.LabelInUse(label)) break;
    }
  }
  AbstractionToken token{label};
  map.Add(e, token).IgnoreError();
  return token;
}

absl::StatusOr<std::string> ApplyAbstractions(const Document& doc,
                                              const AbstractionMap& map) {
  std::vector<const AbstractionMap::Entry*> entries;
  for (const AbstractionMap::Entry& entry : map.entries()) {
    if (!EntityMatchesBody(entry.entity, doc.body)) {
      return MakeError(ErrorKind::kPayloadInvalid,
                       absl::StrCat("map entry '", entry.entity.surface,
                                    "' does not match the document at ",
                                    entry.entity.span.start));
    }
    entries.push_back(&entry);
  }
  std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
    return a->entity.span.start < b->entity.span.start;
  });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1]->entity.span.Overlaps(entries[i]->entity.span)) {
      return MakeError(ErrorKind::kOverlappingSpans,
                       absl::StrCat("spans at ", entries[i - 1]->entity.span.start, " and ",
                                    entries[i]->entity.span.start, " overlap"));
    }
  }
  std::string text = doc.body;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    const Span& span = (*it)->entity.span;
    text.replace(span.start, span.length(), (*it)->token.label);
  }
  return text;
}

absl::StatusOr<std::string> AddDpNoise(absl::string_view text,
                                       const std::vector<Entity>& numeric_fields,
                                       double epsilon, const SanitizerConfig& cfg,
                                       Rng& rng) {
  if (epsilon == 0.0) {
    return MakeError(ErrorKind::kZeroEpsilon, "DP noise needs epsilon > 0");
  }
  std::vector<Entity> fields = numeric_fields;
  std::sort(fields.begin(), fields.end(), [](const Entity& a, const Entity& b) {
    return a.span.start < b.span.start;
  });
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const Entity& field = fields[i];
    if (!EntityMatchesBody(field, text)) {
      return MakeError(ErrorKind::kPayloadInvalid,
                       absl::StrCat("numeric field '", field.surface, "' is not at ",
                                    field.span.start));
    }
    if (i > 0 && fields[i - 1].span.Overlaps(field.span)) {
      return MakeError(ErrorKind::kOverlappingSpans, "numeric fields overlap");
    }
    std::optional<double> value = ParseNumericValue(field.kind, field.surface);
    if (!value) {
      return MakeError(ErrorKind::kPayloadInvalid,
                       absl::StrCat("'", field.surface, "' is not a numeric field"));
    }
    auto sens = cfg.dp_sensitivity.find(field.kind);
    if (sens == cfg.dp_sensitivity.end()) {
      return MakeError(ErrorKind::kConfigInvalid,
                       absl::StrCat("no dp_sensitivity for ", EntityKindName(field.kind)));
    }
    SPLITAGENT_ASSIGN_OR_RETURN(const double scale, LaplaceScale(sens->second, epsilon));
    const double noisy = *value + SampleLaplace(rng, scale);
    const auto& buckets = field.kind == EntityKind::kMoneyAmount ? cfg.amount_buckets
                                                                 : cfg.percent_buckets;
    labels.push_back(absl::StrCat(TokenPrefix(field.kind), "_", BucketLabel(buckets, noisy)));
  }
  std::string out(text);
  for (std::size_t i = fields.size(); i-- > 0;) {
    out.replace(fields[i].span.start, fields[i].span.length(), labels[i]);
  }
  return out;
}

std::vector<std::string> SanitizeResult::HiddenSurfaces() const {
  std::vector<std::string> surfaces = map.Surfaces();
  std::set<std::string> seen(surfaces.begin(), surfaces.end());
  for (const Entity& e : noised) {
    if (seen.insert(e.surface).second) surfaces.push_back(e.surface);
  }
  return surfaces;
}

absl::StatusOr<SanitizeResult> Sanitize(const Document& doc, TaskType task, double epsilon,
                                        const SanitizerConfig& cfg, const SanitizeContext& context) {
  const HiddenSet& carried = context.carried;
  SPLITAGENT_RETURN_IF_ERROR(
      (PrivacyParams{.epsilon = epsilon, .delta = cfg.delta}).ValidateForLaplace());
  const TaskProfile* profile = cfg.ProfileFor(task);
  if (profile == nullptr) {
    return MakeError(ErrorKind::kConfigInvalid,
                     absl::StrCat("no profile registered for ", TaskTypeName(task)));
  }

  SanitizeResult result;
  result.map = AbstractionMap(task);
  result.entities = ExtractEntities(doc, cfg.rules);

  const bool dp_branch = cfg.policy == SanitizationPolicy::kContextAware &&
                         profile->requires_dp() && epsilon > 0.0;
  const SensitivityLevel threshold = PrivacyThreshold(epsilon, cfg);

  // Working set: each entity with its effective level and a decision.
  struct Slot {
    Entity entity;
    bool abstracted = false;
    bool noised = false;
  };
  std::vector<Slot> slots;
  for (const Entity& e : result.entities) {
    Slot slot{e};
    slot.entity.sensitivity = SensitivityOf(e, *profile);
    switch (cfg.policy) {
      case SanitizationPolicy::kContextAware:
        slot.abstracted = Ordinal(slot.entity.sensitivity) > Ordinal(threshold);
        break;
      case SanitizationPolicy::kStaticKinds:
        slot.abstracted = cfg.static_kinds.count(e.kind) > 0;
        break;
      case SanitizationPolicy::kPassThrough:
        break;
    }
    const bool revealed = context.revealed.count(e.surface) > 0;
    if (revealed) slot.abstracted = false;
    if (carried.count(e.surface)) slot.abstracted = true;
    slot.noised = dp_branch && !slot.abstracted && !revealed &&
                  profile->numeric_dp_fields.count(e.kind) > 0 &&
                  ParseNumericValue(e.kind, e.surface).has_value();
    slots.push_back(std::move(slot));
  }

  // Closure: a hidden surface can also occur inside or across a kept entity,
  // or in text no rule claimed. Each such occurrence is abstracted on its
  // own, until every occurrence is covered.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::string, const Slot*> hidden;
    for (const Slot& s : slots) {
      if (s.abstracted || s.noised) hidden.emplace(s.entity.surface, &s);
    }
    for (const auto& [surface, kind] : carried) hidden.emplace(surface, nullptr);
    std::vector<Slot> extras;
    for (const auto& [h, origin] : hidden) {
      std::size_t pos = 0;
      while ((pos = doc.body.find(h, pos)) != std::string::npos) {
        const Span span{pos, pos + h.size()};
        const auto covers = [&](const Slot& s) {
          return (s.abstracted || s.noised) && s.entity.span.Overlaps(span);
        };
        if (std::none_of(slots.begin(), slots.end(), covers) &&
            std::none_of(extras.begin(), extras.end(), covers)) {
          Slot extra;
          extra.entity = origin != nullptr
                             ? Entity{span, origin->entity.kind, h, origin->entity.sensitivity}
                             : Entity{span, carried.at(h), h, SensitivityLevel::kConfidential};
          extra.abstracted = true;
          extras.push_back(std::move(extra));
        }
        pos += 1;
      }
    }
    if (!extras.empty()) {
      changed = true;
      for (Slot& e : extras) slots.push_back(std::move(e));
    }
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    return a.entity.span.start < b.entity.span.start;
  });

  for (const Slot& s : slots) {
    if (s.abstracted) GenerateAbstraction(s.entity, *profile, result.map, cfg);
  }
  SPLITAGENT_ASSIGN_OR_RETURN(std::string text, ApplyAbstractions(doc, result.map));

  double epsilon_spent = std::min(cfg.floor_cost, epsilon);
  if (dp_branch) {
    // Rebase the kept numeric spans into the abstracted text.
    std::vector<Entity> fields;
    std::ptrdiff_t shift = 0;
    std::size_t next_entry = 0;
    std::vector<const AbstractionMap::Entry*> entries;
    for (const auto& entry : result.map.entries()) entries.push_back(&entry);
    std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
      return a->entity.span.start < b->entity.span.start;
    });
    for (const Slot& s : slots) {
      while (next_entry < entries.size() &&
             entries[next_entry]->entity.span.start < s.entity.span.start) {
        shift += static_cast<std::ptrdiff_t>(entries[next_entry]->token.label.size()) -
                 static_cast<std::ptrdiff_t>(entries[next_entry]->entity.span.length());
        ++next_entry;
      }
      if (!s.noised) continue;
      Entity moved = s.entity;
      moved.span.start = static_cast<std::size_t>(s.entity.span.start + shift);
      moved.span.end = static_cast<std::size_t>(s.entity.span.end + shift);
      fields.push_back(moved);
      result.noised.push_back(s.entity);
    }
    Rng rng(DeriveSeed(cfg.rng_seed, doc.id));
    SPLITAGENT_ASSIGN_OR_RETURN(text, AddDpNoise(text, fields, epsilon, cfg, rng));
    epsilon_spent = epsilon;
  }

  if (!IsLeakFree(text, result.HiddenSurfaces())) {
    return absl::InternalError(absl::StrCat("sanitized body of ", doc.id,
                                            " still contains a hidden surface"));
  }

  result.document.origin_id = doc.id;
  result.document.epsilon_spent = epsilon_spent;
  result.document.utility =
      EstimateUtility(task, doc, text, *profile, result.entities);
  result.document.body = std::move(text);
  if (result.document.utility.value < cfg.utility_threshold_tau) {
    result.utility_status = MakeError(
        ErrorKind::kUtilityBelowThreshold,
        absl::StrCat("utility ", result.document.utility.value, " < tau ",
                     cfg.utility_threshold_tau));
  }
  return result;
}

}  // namespace splitagent
