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

#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "splitagent/status.h"

namespace splitagent {
namespace {

void ExpectSameConfig(const SanitizerConfig& a, const SanitizerConfig& b) {
  EXPECT_EQ(a.utility_threshold_tau, b.utility_threshold_tau);
  EXPECT_EQ(a.floor_cost, b.floor_cost);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.rng_seed, b.rng_seed);
  EXPECT_EQ(a.amount_buckets, b.amount_buckets);
  EXPECT_EQ(a.percent_buckets, b.percent_buckets);
  EXPECT_EQ(a.dp_sensitivity, b.dp_sensitivity);
  EXPECT_EQ(a.threshold_table, b.threshold_table);
  EXPECT_EQ(a.rules.rules(), b.rules.rules());
  EXPECT_EQ(a.profiles, b.profiles);
  EXPECT_EQ(a.policy, b.policy);
  EXPECT_EQ(a.static_kinds, b.static_kinds);
}

TEST(ConfigFileTest, ShippedDefaultMatchesBuiltIn) {
  auto loaded = LoadConfigFile(std::string(SPLITAGENT_SOURCE_DIR) + "/config/default_config.json");
  ASSERT_TRUE(loaded.ok()) << loaded.status();
  ExpectSameConfig(*loaded, DefaultSanitizerConfig());
}

TEST(ConfigFileTest, JsonRoundTrip) {
  for (const SanitizerConfig& cfg :
       {DefaultSanitizerConfig(), StaticMaskConfig(DefaultSanitizerConfig()),
        PassThroughConfig(DefaultSanitizerConfig())}) {
    auto back = ParseConfigJson(ConfigToJson(cfg));
    ASSERT_TRUE(back.ok()) << back.status();
    ExpectSameConfig(*back, cfg);
  }
}

TEST(ConfigFileTest, RejectsBadInput) {
  auto invalid = [](const absl::Status& s) { return HasErrorKind(s, ErrorKind::kConfigInvalid); };
  EXPECT_TRUE(invalid(ParseConfigJson("{").status()));
  EXPECT_TRUE(HasErrorKind(LoadConfigFile("/nonexistent/splitagent.json").status(),
                           ErrorKind::kIoFailure));
  auto j = nlohmann::json::parse(ConfigToJson(DefaultSanitizerConfig()));
  auto with = [&](auto mutate) {
    auto copy = j;
    mutate(copy);
    return ParseConfigJson(copy.dump()).status();
  };
  EXPECT_TRUE(invalid(with([](auto& c) { c["delta"] = 0.1; })));
  EXPECT_TRUE(invalid(with([](auto& c) { c["amount_buckets"] = nlohmann::json::array(); })));
  EXPECT_TRUE(invalid(with([](auto& c) {
    std::swap(c["amount_buckets"][0], c["amount_buckets"][1]);
  })));
  EXPECT_TRUE(invalid(with([](auto& c) { c["dp_sensitivity"]["MoneyAmount"] = 0.0; })));
}

TEST(ValidateConfigTest, DefaultsAndBaselinesAreValid) {
  const SanitizerConfig base = DefaultSanitizerConfig();
  EXPECT_TRUE(ValidateConfig(base).ok());
  EXPECT_TRUE(ValidateConfig(StaticRegexConfig(base)).ok());
  EXPECT_TRUE(ValidateConfig(StaticKindConfig(base)).ok());
  SanitizerConfig bad = base;
  bad.threshold_table.clear();
  EXPECT_TRUE(HasErrorKind(ValidateConfig(bad), ErrorKind::kConfigInvalid));
  bad = base;
  bad.profiles.erase(TaskType::kCodeReview);
  EXPECT_TRUE(HasErrorKind(ValidateConfig(bad), ErrorKind::kConfigInvalid));
}

}  // namespace
}  // namespace splitagent
