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

#ifndef SPLITAGENT_UTILITY_H_
#define SPLITAGENT_UTILITY_H_

// Task utility estimate U(T, D~) for a sanitized body.
//
// Each utility feature extracts a multiset of items from a text. Its retention
// ratio is |items(original) ∩ items(sanitized)| / |items(original)| with
// multiset intersection. Features whose original multiset is empty carry no
// information about the document; they are dropped and the remaining weights
// renormalised. A document with no informative feature scores 1.
//
// Feature ids:
//   word_retention      every word (runs of letters, digits, '_' and non-ASCII)
//   clause_headings     numbered or "Section N" heading lines
//   legal_terms         contract vocabulary
//   code_identifiers    snake_case identifiers
//   code_syntax         bracket, operator and separator characters
//   finance_terms       accounting vocabulary
//   sentiment_words     customer sentiment vocabulary
//   issue_terms         support issue vocabulary
//   risk_terms          risk vocabulary
//   compliance_terms    regulatory vocabulary
//   preserved_entities  surfaces of entities whose kind the profile preserves

#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "splitagent/core_model.h"

namespace splitagent {

bool IsKnownFeature(absl::string_view feature_id);
const std::vector<std::string>& KnownFeatures();

// Word tokenizer shared by utility, retrieval and the reasoning stub.
std::vector<std::string> Words(absl::string_view text);

// Items of one feature in `text`. `entities` are the original document's
// entities and are only consulted by preserved_entities.
std::vector<std::string> FeatureItems(absl::string_view feature_id,
                                      absl::string_view text,
                                      const TaskProfile& profile,
                                      const std::vector<Entity>& entities);

// Multiset retention; nullopt when `original_items` is empty.
std::optional<double> Retention(const std::vector<std::string>& original_items,
                                const std::vector<std::string>& sanitized_items);

UtilityScore EstimateUtility(TaskType task, const Document& original,
                             absl::string_view sanitized_body,
                             const TaskProfile& profile,
                             const std::vector<Entity>& entities);

}  // namespace splitagent

#endif  // SPLITAGENT_UTILITY_H_
