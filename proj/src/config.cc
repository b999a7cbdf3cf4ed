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

#include "splitagent/config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/regex.hpp>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "splitagent/gazetteers.h"
#include "splitagent/status.h"
#include "splitagent/utility.h"

namespace splitagent {

using nlohmann::json;

struct Ruleset::Impl {
  std::vector<ExtractionRule> rules;
  std::vector<boost::regex> compiled;  // empty regex for gazetteer rules
};

namespace {

bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

std::vector<Span> GazetteerMatches(const std::vector<std::string>& entries,
                                   absl::string_view text) {
  std::vector<Span> spans;
  for (const std::string& entry : entries) {
    std::size_t pos = 0;
    while ((pos = text.find(entry, pos)) != absl::string_view::npos) {
      const std::size_t end = pos + entry.size();
      const bool left_ok = pos == 0 || !IsWordByte(text[pos - 1]);
      const bool right_ok = end == text.size() || !IsWordByte(text[end]);
      if (left_ok && right_ok) spans.push_back({pos, end});
      pos += 1;
    }
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  return spans;
}

absl::Status Invalid(absl::string_view what) {
  return MakeError(ErrorKind::kConfigInvalid, what);
}

}  // namespace

Ruleset::Ruleset() {
  static const auto* empty = new std::shared_ptr<const Impl>(std::make_shared<Impl>());
  impl_ = *empty;
}

absl::StatusOr<Ruleset> Ruleset::Compile(std::vector<ExtractionRule> rules) {
  auto impl = std::make_shared<Impl>();
  for (const ExtractionRule& rule : rules) {
    if (rule.is_gazetteer()) {
      if (rule.gazetteer.empty()) {
        return Invalid(absl::StrCat("rule for ", EntityKindName(rule.kind),
                                    " has neither pattern nor gazetteer"));
      }
      for (const std::string& entry : rule.gazetteer) {
        if (entry.empty()) return Invalid("empty gazetteer entry");
      }
      impl->compiled.emplace_back();
      continue;
    }
    try {
      impl->compiled.emplace_back(rule.pattern, boost::regex::perl);
    } catch (const boost::regex_error& e) {
      return Invalid(absl::StrCat("pattern for ", EntityKindName(rule.kind),
                                  " does not compile: ", e.what()));
    }
  }
  impl->rules = std::move(rules);
  return Ruleset(std::move(impl));
}

const std::vector<ExtractionRule>& Ruleset::rules() const { return impl_->rules; }

std::vector<Span> Ruleset::Matches(std::size_t index, absl::string_view text) const {
  const ExtractionRule& rule = impl_->rules.at(index);
  if (rule.is_gazetteer()) return GazetteerMatches(rule.gazetteer, text);
  std::vector<Span> spans;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  boost::cregex_iterator it(begin, end, impl_->compiled[index]);
  for (; it != boost::cregex_iterator(); ++it) {
    const auto& match = (*it)[0];
    if (match.length() == 0) continue;
    spans.push_back({static_cast<std::size_t>(match.first - begin),
                     static_cast<std::size_t>(match.second - begin)});
  }
  return spans;
}

const char* PolicyName(SanitizationPolicy policy) {
  switch (policy) {
    case SanitizationPolicy::kContextAware: return "context_aware";
    case SanitizationPolicy::kPassThrough: return "pass_through";
    case SanitizationPolicy::kStaticKinds: return "static_kinds";
  }
  return "?";
}

const TaskProfile* SanitizerConfig::ProfileFor(TaskType task) const {
  auto it = profiles.find(task);
  return it == profiles.end() ? nullptr : &it->second;
}

absl::Status ValidateConfig(const SanitizerConfig& config) {
  SPLITAGENT_RETURN_IF_ERROR(
      (PrivacyParams{.epsilon = 0.0, .delta = config.delta}).ValidateForLaplace());
  if (!(config.utility_threshold_tau >= 0.0 && config.utility_threshold_tau <= 1.0)) {
    return Invalid("utility_threshold_tau must lie in [0, 1]");
  }
  if (!(config.floor_cost > 0.0)) return Invalid("floor_cost must be positive");
  for (const auto* buckets : {&config.amount_buckets, &config.percent_buckets}) {
    if (buckets->empty()) return Invalid("bucket list is empty");
    for (std::size_t i = 1; i < buckets->size(); ++i) {
      if (!((*buckets)[i - 1].upper_bound < (*buckets)[i].upper_bound)) {
        return Invalid("bucket bounds must be strictly increasing");
      }
    }
    if (!std::isinf(buckets->back().upper_bound)) {
      return Invalid("the last bucket must be unbounded");
    }
    for (const BucketBound& b : *buckets) {
      if (!IsValidTokenLabel(absl::StrCat("X_", b.label))) {
        return Invalid(absl::StrCat("bucket label '", b.label, "' is not [A-Z0-9]+"));
      }
    }
  }
  if (config.threshold_table.empty()) return Invalid("threshold_table is empty");
  for (std::size_t i = 1; i < config.threshold_table.size(); ++i) {
    const ThresholdStep& prev = config.threshold_table[i - 1];
    const ThresholdStep& cur = config.threshold_table[i];
    if (!(prev.epsilon_below < cur.epsilon_below)) {
      return Invalid("threshold_table epsilon bounds must increase");
    }
    if (Ordinal(cur.level) < Ordinal(prev.level)) {
      return Invalid("threshold_table levels must not tighten as epsilon grows");
    }
  }
  if (!std::isinf(config.threshold_table.back().epsilon_below)) {
    return Invalid("the last threshold step must be unbounded");
  }
  for (TaskType task : kAllTaskTypes) {
    const TaskProfile* profile = config.ProfileFor(task);
    if (profile == nullptr) {
      return Invalid(absl::StrCat("no profile for ", TaskTypeName(task)));
    }
    std::vector<std::string> violations = ValidateProfile(*profile);
    if (!violations.empty()) {
      return Invalid(absl::StrCat(TaskTypeName(task), ": ", violations.front()));
    }
    for (const UtilityFeature& f : profile->utility_features) {
      if (!IsKnownFeature(f.extractor_id)) {
        return Invalid(absl::StrCat("unknown utility feature ", f.extractor_id));
      }
    }
    for (EntityKind kind : profile->numeric_dp_fields) {
      if (kind != EntityKind::kMoneyAmount && kind != EntityKind::kPercentage) {
        return Invalid("numeric_dp fields must be MoneyAmount or Percentage");
      }
      auto it = config.dp_sensitivity.find(kind);
      if (it == config.dp_sensitivity.end() || !(it->second > 0.0)) {
        return Invalid(absl::StrCat("missing positive dp_sensitivity for ",
                                    EntityKindName(kind)));
      }
    }
  }
  return absl::OkStatus();
}

std::vector<ExtractionRule> DefaultExtractionRules() {
  using K = EntityKind;
  using L = SensitivityLevel;
  std::vector<ExtractionRule> rules = {
      {K::kCredential, R"(\b(?:sk_live|sk_test|ghp|AKIA|xoxb)[A-Za-z0-9_\-]{10,})", {},
       L::kSecret},
      {K::kEmail, R"(\b[A-Za-z0-9._%+\-]+@[A-Za-z0-9.\-]+\.[A-Za-z]{2,}\b)", {},
       L::kConfidential},
      {K::kUrl, R"(\bhttps?://[A-Za-z0-9._~:/?#@!$&*+,;=%\-]*[A-Za-z0-9/_~#=%\-])", {},
       L::kInternal},
      {K::kPhone, R"((?:\+1 )?(?:\(\d{3}\) |\b\d{3}-)\d{3}-\d{4}\b)", {},
       L::kConfidential},
      {K::kAccountId, R"(\b(?:ACCT|CUST|INV)-\d{5,10}\b)", {}, L::kConfidential},
      {K::kMoneyAmount,
       R"(\$(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d{2})?(?: (?:million|billion)\b)?)", {},
       L::kConfidential},
      {K::kPercentage, R"(\b\d{1,3}(?:\.\d+)?%)", {}, L::kInternal},
      {K::kDate,
       R"(\b(?:January|February|March|April|May|June|July|August|September|)"
       R"(October|November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sept|Sep|Oct|)"
       R"(Nov|Dec)\.? \d{1,2}(?:st|nd|rd|th)?\b(?:, \d{4}\b)?)"
       R"(|\b\d{4}-\d{2}-\d{2}\b|\b\d{1,2}/\d{1,2}/\d{4}\b)",
       {}, L::kInternal},
      {K::kAddress,
       R"(\b\d{1,5} (?:[A-Z][a-z]+ )+(?:Street|Avenue|Road|Boulevard|Lane|Drive)\b)",
       {}, L::kConfidential},
      {K::kCodeIdentifier, R"(\b(?:internal|proprietary|legacy)_[a-z][a-z0-9_]*\b)", {},
       L::kInternal},
      {K::kPersonName, "", PersonNames(), L::kConfidential},
      {K::kPersonName, R"(\b(?:Mr|Ms|Mrs|Dr)\. [A-Z][a-z]+\b)", {}, L::kConfidential},
      {K::kOrgName, "", OrgNames(), L::kInternal},
      {K::kOrgName, R"(\b[A-Z][A-Za-z]+ (?:Corp|Inc|LLC|Ltd|GmbH|Group|Holdings)\b)", {},
       L::kInternal},
  };
  return rules;
}

std::map<TaskType, TaskProfile> DefaultTaskProfiles() {
  using K = EntityKind;
  std::map<TaskType, TaskProfile> profiles;
  profiles[TaskType::kContractReview] = {
      TaskType::kContractReview,
      {K::kPercentage, K::kUrl},
      {K::kOrgName, K::kPersonName, K::kMoneyAmount, K::kDate, K::kAddress},
      {K::kMoneyAmount},
      {{"clause_headings", 0.3},
       {"legal_terms", 0.3},
       {"word_retention", 0.2},
       {"preserved_entities", 0.2}}};
  profiles[TaskType::kCodeReview] = {
      TaskType::kCodeReview,
      {K::kCodeIdentifier, K::kDate, K::kPercentage},
      {K::kCredential, K::kUrl, K::kEmail, K::kPersonName, K::kAccountId},
      {},
      {{"code_identifiers", 0.4},
       {"code_syntax", 0.2},
       {"word_retention", 0.2},
       {"preserved_entities", 0.2}}};
  profiles[TaskType::kFinancialAnalysis] = {
      TaskType::kFinancialAnalysis,
      {K::kPercentage, K::kDate},
      {K::kAccountId, K::kOrgName, K::kPersonName, K::kMoneyAmount},
      {K::kMoneyAmount},
      {{"finance_terms", 0.3},
       {"preserved_entities", 0.4},
       {"word_retention", 0.3}}};
  profiles[TaskType::kCustomerSupport] = {
      TaskType::kCustomerSupport,
      {K::kDate, K::kUrl},
      {K::kPersonName, K::kEmail, K::kPhone, K::kAccountId, K::kAddress},
      {},
      {{"sentiment_words", 0.4},
       {"issue_terms", 0.3},
       {"preserved_entities", 0.1},
       {"word_retention", 0.2}}};
  profiles[TaskType::kRiskAssessment] = {
      TaskType::kRiskAssessment,
      {K::kPercentage, K::kDate},
      {K::kOrgName, K::kPersonName, K::kAccountId, K::kMoneyAmount},
      {},
      {{"risk_terms", 0.4},
       {"preserved_entities", 0.3},
       {"word_retention", 0.3}}};
  profiles[TaskType::kComplianceCheck] = {
      TaskType::kComplianceCheck,
      {K::kDate, K::kUrl, K::kOrgName},
      {K::kPersonName, K::kEmail, K::kPhone, K::kAccountId, K::kAddress,
       K::kCredential},
      {},
      {{"compliance_terms", 0.4},
       {"preserved_entities", 0.3},
       {"word_retention", 0.3}}};
  return profiles;
}

SanitizerConfig DefaultSanitizerConfig() {
  SanitizerConfig config;
  config.amount_buckets = {{10000.0, "SMALL"},
                           {100000.0, "MEDIUM"},
                           {std::numeric_limits<double>::infinity(), "LARGE"}};
  config.percent_buckets = {{10.0, "LOW"},
                            {50.0, "MID"},
                            {std::numeric_limits<double>::infinity(), "HIGH"}};
  config.dp_sensitivity = {{EntityKind::kMoneyAmount, 10000.0},
                           {EntityKind::kPercentage, 5.0}};
  config.threshold_table = {
      {0.5, SensitivityLevel::kPublic},
      {2.0, SensitivityLevel::kInternal},
      {5.0, SensitivityLevel::kConfidential},
      {std::numeric_limits<double>::infinity(), SensitivityLevel::kRestricted}};
  config.rules = *Ruleset::Compile(DefaultExtractionRules());
  config.profiles = DefaultTaskProfiles();
  return config;
}

SanitizerConfig PassThroughConfig(const SanitizerConfig& base) {
  SanitizerConfig config = base;
  config.policy = SanitizationPolicy::kPassThrough;
  config.static_kinds.clear();
  return config;
}

SanitizerConfig StaticKindsConfig(const SanitizerConfig& base,
                                  std::set<EntityKind> kinds) {
  SanitizerConfig config = base;
  config.policy = SanitizationPolicy::kStaticKinds;
  config.static_kinds = std::move(kinds);
  return config;
}

SanitizerConfig StaticMaskConfig(const SanitizerConfig& base) {
  return StaticKindsConfig(
      base, {EntityKind::kEmail, EntityKind::kPhone, EntityKind::kAccountId});
}

SanitizerConfig StaticRegexConfig(const SanitizerConfig& base) {
  std::set<EntityKind> kinds;
  for (const ExtractionRule& rule : base.rules.rules()) {
    if (!rule.is_gazetteer()) kinds.insert(rule.kind);
  }
  // Title-prefixed names and suffixed organisations are structural, not
  // regex-shaped identifiers, so a pattern-only masker leaves them alone.
  kinds.erase(EntityKind::kPersonName);
  kinds.erase(EntityKind::kOrgName);
  return StaticKindsConfig(base, std::move(kinds));
}

SanitizerConfig StaticKindConfig(const SanitizerConfig& base) {
  using K = EntityKind;
  return StaticKindsConfig(base, {K::kPersonName, K::kOrgName, K::kEmail, K::kPhone,
                                  K::kAccountId, K::kCredential, K::kAddress,
                                  K::kMoneyAmount});
}

namespace {

json BoundToJson(double bound) {
  return std::isinf(bound) ? json(nullptr) : json(bound);
}

absl::StatusOr<double> BoundFromJson(const json& value) {
  if (value.is_null()) return std::numeric_limits<double>::infinity();
  if (!value.is_number()) return Invalid("bound must be a number or null");
  return value.get<double>();
}

json KindsToJson(const std::set<EntityKind>& kinds) {
  json out = json::array();
  for (EntityKind kind : kinds) out.push_back(std::string(EntityKindName(kind)));
  return out;
}

absl::StatusOr<std::set<EntityKind>> KindsFromJson(const json& value) {
  std::set<EntityKind> kinds;
  if (!value.is_array()) return Invalid("kind list must be an array");
  for (const json& item : value) {
    std::optional<EntityKind> kind = ParseEntityKind(item.get<std::string>());
    if (!kind) return Invalid(absl::StrCat("unknown kind ", item.dump()));
    kinds.insert(*kind);
  }
  return kinds;
}

absl::StatusOr<std::vector<BucketBound>> BucketsFromJson(const json& value) {
  std::vector<BucketBound> buckets;
  for (const json& item : value) {
    BucketBound bucket;
    SPLITAGENT_ASSIGN_OR_RETURN(bucket.upper_bound, BoundFromJson(item.at("upper")));
    bucket.label = item.at("label").get<std::string>();
    buckets.push_back(std::move(bucket));
  }
  return buckets;
}

json BucketsToJson(const std::vector<BucketBound>& buckets) {
  json out = json::array();
  for (const BucketBound& b : buckets) {
    out.push_back({{"upper", BoundToJson(b.upper_bound)}, {"label", b.label}});
  }
  return out;
}

absl::StatusOr<SanitizerConfig> ConfigFromJson(const json& root) {
  SanitizerConfig config;
  config.utility_threshold_tau = root.at("utility_threshold_tau").get<double>();
  config.floor_cost = root.at("floor_cost").get<double>();
  config.delta = root.value("delta", 0.0);
  config.rng_seed = root.value("rng_seed", std::uint64_t{0});
  SPLITAGENT_ASSIGN_OR_RETURN(config.amount_buckets,
                              BucketsFromJson(root.at("amount_buckets")));
  SPLITAGENT_ASSIGN_OR_RETURN(config.percent_buckets,
                              BucketsFromJson(root.at("percent_buckets")));
  for (const auto& [name, value] : root.at("dp_sensitivity").items()) {
    std::optional<EntityKind> kind = ParseEntityKind(name);
    if (!kind) return Invalid(absl::StrCat("unknown kind ", name));
    config.dp_sensitivity[*kind] = value.get<double>();
  }
  for (const json& item : root.at("threshold_table")) {
    ThresholdStep step;
    SPLITAGENT_ASSIGN_OR_RETURN(step.epsilon_below, BoundFromJson(item.at("below")));
    std::optional<SensitivityLevel> level =
        ParseSensitivity(item.at("level").get<std::string>());
    if (!level) return Invalid("unknown sensitivity level");
    step.level = *level;
    config.threshold_table.push_back(step);
  }
  std::vector<ExtractionRule> rules;
  for (const json& item : root.at("rules")) {
    ExtractionRule rule;
    std::optional<EntityKind> kind = ParseEntityKind(item.at("kind").get<std::string>());
    std::optional<SensitivityLevel> level =
        ParseSensitivity(item.at("base_sensitivity").get<std::string>());
    if (!kind || !level) return Invalid("rule has unknown kind or sensitivity");
    rule.kind = *kind;
    rule.base_sensitivity = *level;
    if (item.contains("pattern")) rule.pattern = item.at("pattern").get<std::string>();
    if (item.contains("gazetteer")) {
      rule.gazetteer = item.at("gazetteer").get<std::vector<std::string>>();
    }
    if (rule.pattern.empty() == rule.gazetteer.empty()) {
      return Invalid("each rule needs exactly one of pattern or gazetteer");
    }
    rules.push_back(std::move(rule));
  }
  SPLITAGENT_ASSIGN_OR_RETURN(config.rules, Ruleset::Compile(std::move(rules)));
  for (const json& item : root.at("profiles")) {
    TaskProfile profile;
    std::optional<TaskType> task = ParseTaskType(item.at("task").get<std::string>());
    if (!task) return Invalid("profile has unknown task");
    profile.task = *task;
    SPLITAGENT_ASSIGN_OR_RETURN(profile.preserve_kinds, KindsFromJson(item.at("preserve")));
    SPLITAGENT_ASSIGN_OR_RETURN(profile.abstract_kinds, KindsFromJson(item.at("abstract")));
    SPLITAGENT_ASSIGN_OR_RETURN(profile.numeric_dp_fields,
                                KindsFromJson(item.at("numeric_dp")));
    for (const json& f : item.at("features")) {
      profile.utility_features.push_back(
          {f.at("id").get<std::string>(), f.at("weight").get<double>()});
    }
    if (!config.profiles.emplace(profile.task, profile).second) {
      return Invalid(absl::StrCat("duplicate profile for ", TaskTypeName(profile.task)));
    }
  }
  const std::string policy = root.value("policy", std::string("context_aware"));
  if (policy == "context_aware") {
    config.policy = SanitizationPolicy::kContextAware;
  } else if (policy == "pass_through") {
    config.policy = SanitizationPolicy::kPassThrough;
  } else if (policy == "static_kinds") {
    config.policy = SanitizationPolicy::kStaticKinds;
  } else {
    return Invalid(absl::StrCat("unknown policy ", policy));
  }
  if (root.contains("static_kinds")) {
    SPLITAGENT_ASSIGN_OR_RETURN(config.static_kinds, KindsFromJson(root.at("static_kinds")));
  }
  SPLITAGENT_RETURN_IF_ERROR(ValidateConfig(config));
  return config;
}

}  // namespace

std::string ConfigToJson(const SanitizerConfig& config) {
  json root;
  root["utility_threshold_tau"] = config.utility_threshold_tau;
  root["floor_cost"] = config.floor_cost;
  root["delta"] = config.delta;
  root["rng_seed"] = config.rng_seed;
  root["amount_buckets"] = BucketsToJson(config.amount_buckets);
  root["percent_buckets"] = BucketsToJson(config.percent_buckets);
  json sens = json::object();
  for (const auto& [kind, value] : config.dp_sensitivity) {
    sens[std::string(EntityKindName(kind))] = value;
  }
  root["dp_sensitivity"] = sens;
  json table = json::array();
  for (const ThresholdStep& step : config.threshold_table) {
    table.push_back({{"below", BoundToJson(step.epsilon_below)},
                     {"level", std::string(SensitivityName(step.level))}});
  }
  root["threshold_table"] = table;
  json rules = json::array();
  for (const ExtractionRule& rule : config.rules.rules()) {
    json item = {{"kind", std::string(EntityKindName(rule.kind))},
                 {"base_sensitivity", std::string(SensitivityName(rule.base_sensitivity))}};
    if (rule.is_gazetteer()) {
      item["gazetteer"] = rule.gazetteer;
    } else {
      item["pattern"] = rule.pattern;
    }
    rules.push_back(item);
  }
  root["rules"] = rules;
  json profiles = json::array();
  for (const auto& [task, profile] : config.profiles) {
    json features = json::array();
    for (const UtilityFeature& f : profile.utility_features) {
      features.push_back({{"id", f.extractor_id}, {"weight", f.weight}});
    }
    profiles.push_back({{"task", std::string(TaskTypeName(task))},
                        {"preserve", KindsToJson(profile.preserve_kinds)},
                        {"abstract", KindsToJson(profile.abstract_kinds)},
                        {"numeric_dp", KindsToJson(profile.numeric_dp_fields)},
                        {"features", features}});
  }
  root["profiles"] = profiles;
  root["policy"] = std::string(PolicyName(config.policy));
  root["static_kinds"] = KindsToJson(config.static_kinds);
  return root.dump(2) + "\n";
}

absl::StatusOr<SanitizerConfig> ParseConfigJson(absl::string_view text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    return Invalid("config is not a JSON object");
  }
  try {
    return ConfigFromJson(root);
  } catch (const json::exception& e) {
    return Invalid(absl::StrCat("config schema: ", e.what()));
  }
}

absl::StatusOr<SanitizerConfig> LoadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigJson(buffer.str());
}

}  // namespace splitagent
