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

#ifndef SPLITAGENT_CONFIG_H_
#define SPLITAGENT_CONFIG_H_

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/core_model.h"

namespace splitagent {

// One extraction rule: either a regular expression (Perl syntax) or a
// gazetteer of literal surfaces matched on word boundaries.
struct ExtractionRule {
  EntityKind kind = EntityKind::kPersonName;
  std::string pattern;
  std::vector<std::string> gazetteer;
  SensitivityLevel base_sensitivity = SensitivityLevel::kPublic;

  bool is_gazetteer() const { return pattern.empty(); }
  friend bool operator==(const ExtractionRule&, const ExtractionRule&) = default;
};

// A value v belongs to the first bucket with v < upper_bound.
struct BucketBound {
  double upper_bound = std::numeric_limits<double>::infinity();
  std::string label;

  friend bool operator==(const BucketBound&, const BucketBound&) = default;
};

// epsilon < epsilon_below selects `level`; the last step should be unbounded.
struct ThresholdStep {
  double epsilon_below = std::numeric_limits<double>::infinity();
  SensitivityLevel level = SensitivityLevel::kPublic;

  friend bool operator==(const ThresholdStep&, const ThresholdStep&) = default;
};

// Compiled, immutable rule list. Copies share the compiled patterns.
class Ruleset {
 public:
  Ruleset();
  static absl::StatusOr<Ruleset> Compile(std::vector<ExtractionRule> rules);

  const std::vector<ExtractionRule>& rules() const;
  std::size_t size() const { return rules().size(); }

  // Start/end byte offsets of every non-overlapping match of rule `index`,
  // left to right.
  std::vector<Span> Matches(std::size_t index, absl::string_view text) const;

 private:
  struct Impl;
  explicit Ruleset(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

enum class SanitizationPolicy {
  kContextAware,  // task profile + privacy threshold + DP noise
  kPassThrough,   // no sanitization at all
  kStaticKinds,   // abstract a fixed kind set, no task awareness, no noise
};

const char* PolicyName(SanitizationPolicy policy);

struct SanitizerConfig {
  double utility_threshold_tau = 0.5;
  double floor_cost = 0.05;
  double delta = 0.0;
  std::uint64_t rng_seed = 0;
  std::vector<BucketBound> amount_buckets;
  std::vector<BucketBound> percent_buckets;
  std::map<EntityKind, double> dp_sensitivity;
  std::vector<ThresholdStep> threshold_table;
  Ruleset rules;
  std::map<TaskType, TaskProfile> profiles;
  SanitizationPolicy policy = SanitizationPolicy::kContextAware;
  std::set<EntityKind> static_kinds;

  const TaskProfile* ProfileFor(TaskType task) const;
};

// Checks bucket ordering, positive sensitivities for every DP field, a
// monotone threshold table, one valid profile per task type and delta == 0.
absl::Status ValidateConfig(const SanitizerConfig& config);

std::vector<ExtractionRule> DefaultExtractionRules();
std::map<TaskType, TaskProfile> DefaultTaskProfiles();
SanitizerConfig DefaultSanitizerConfig();

// Baseline configurations used for comparisons.
SanitizerConfig PassThroughConfig(const SanitizerConfig& base);
SanitizerConfig StaticKindsConfig(const SanitizerConfig& base,
                                  std::set<EntityKind> kinds);
// Email, Phone and AccountId only, the typical regex DLP mask.
SanitizerConfig StaticMaskConfig(const SanitizerConfig& base);
// Every kind detected by a regular-expression rule.
SanitizerConfig StaticRegexConfig(const SanitizerConfig& base);
// A fixed list of identity and financial kinds.
SanitizerConfig StaticKindConfig(const SanitizerConfig& base);

// JSON config files. See config/default_config.json for the schema.
std::string ConfigToJson(const SanitizerConfig& config);
absl::StatusOr<SanitizerConfig> ParseConfigJson(absl::string_view text);
absl::StatusOr<SanitizerConfig> LoadConfigFile(const std::string& path);

}  // namespace splitagent

#endif  // SPLITAGENT_CONFIG_H_
