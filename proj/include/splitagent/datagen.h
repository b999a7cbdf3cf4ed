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

#ifndef SPLITAGENT_DATAGEN_H_
#define SPLITAGENT_DATAGEN_H_

// Synthetic enterprise corpus. Every document is a title line followed by
// template lines, section headings and filler. Each template line is one
// instance of a template from the side info, so ground truth is exact and
// the adversary can align sanitized lines back to templates.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "splitagent/config.h"
#include "splitagent/core_model.h"

namespace splitagent {

// What a worst-case adversary is assumed to know: every candidate surface
// per kind (the truth is always among them) and the templates.
struct SideInfo {
  std::map<EntityKind, std::vector<std::string>> dictionaries;
  // Template text with {SLOT} markers, e.g. "{ORG} will pay {MONEY} by {DATE}.",
  // per source class.
  std::map<SourceClass, std::vector<std::string>> templates;

  friend bool operator==(const SideInfo&, const SideInfo&) = default;
};

SideInfo DefaultSideInfo();
std::string SideInfoToJson(const SideInfo& info);
absl::StatusOr<SideInfo> ParseSideInfo(absl::string_view json);

// Slot name used in templates for a kind, e.g. OrgName -> "ORG".
const char* SlotName(EntityKind kind);
std::optional<EntityKind> KindForSlot(absl::string_view slot);

struct TemplatePart {
  bool is_slot = false;
  std::string text;  // literal text, empty for slots
  EntityKind kind = EntityKind::kPersonName;
};

// Splits a template into literals and slots. Unknown {NAMES} stay literal.
std::vector<TemplatePart> ParseTemplate(absl::string_view tmpl);

struct GenSpec {
  std::map<SourceClass, double> mix = {{SourceClass::kContract, 1.0}};
  int count = 10;
  std::size_t min_bytes = 1024;
  std::size_t max_bytes = 8192;
  std::uint64_t seed = 0;
  // Deepest heading level (1 = "Section N", 2 = "N.M", ...). Our stand-in
  // for document complexity.
  int nesting_depth = 2;
  SideInfo side_info = DefaultSideInfo();
};

// SpecInvalid unless count >= 1, 1 KiB <= min <= max <= 100 KiB,
// max - min >= 256, weights non-negative with a positive sum, depth in
// [1, 4] and every template kind has a non-empty dictionary.
absl::Status ValidateGenSpec(const GenSpec& spec);

struct PlantedEntity {
  Entity entity;
  int line = 0;  // 0-based line in the body
  int slot = 0;  // 0-based slot within that line's template
  int template_index = -1;

  friend bool operator==(const PlantedEntity&, const PlantedEntity&) = default;
};

struct Annotations {
  std::map<std::string, std::vector<PlantedEntity>> by_document;
};

struct Corpus {
  std::vector<Document> documents;
  Annotations annotations;
};

absl::StatusOr<Corpus> GenerateCorpus(const GenSpec& spec);

// Re-renders `doc` (from a corpus generated with `spec`) with fresh values
// for every slot of the given kinds; all other lines are kept byte for byte.
// `variant` selects the resampling stream.
absl::StatusOr<std::pair<Document, std::vector<PlantedEntity>>> GenerateSibling(
    const Document& doc, const std::vector<PlantedEntity>& planted, const GenSpec& spec,
    const std::vector<EntityKind>& vary, std::uint64_t variant);

// Fraction of planted entities the extractor finds with the same span and
// kind.
double ExtractorRecall(const Corpus& corpus, const Ruleset& rules);

// On disk: <id>.txt per document, manifest.tsv (id, source class) and
// annotations.tsv (id, line, slot, entity record).
absl::Status WriteCorpusDir(const Corpus& corpus, const std::string& dir);
absl::StatusOr<Corpus> ReadCorpusDir(const std::string& dir);

absl::StatusOr<GenSpec> ParseGenSpecJson(absl::string_view json);

}  // namespace splitagent

#endif  // SPLITAGENT_DATAGEN_H_
