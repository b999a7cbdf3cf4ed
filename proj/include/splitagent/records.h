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

#ifndef SPLITAGENT_RECORDS_H_
#define SPLITAGENT_RECORDS_H_

// Canonical one-line text records for core types, used by fixture files,
// annotation files and golden tests.
//
// Every record is a single line of tab separated fields. The first field is
// the record type; the rest are `name=value` pairs in the fixed order below.
// Values escape backslash, tab, CR and LF as \\, \t, \r and \n. Reals are
// printed with %.17g so they round-trip exactly.
//
//   document    id source_class task_hint body
//   entity      start end kind sensitivity surface
//   abstraction start end kind sensitivity surface token
//   profile     task preserve abstract numeric_dp features
//   sanitized   origin epsilon_spent utility body
//
// Sets are comma separated kind names in enum order; `features` is a comma
// separated list of id:weight. A missing task hint is written as "-".

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "splitagent/core_model.h"

namespace splitagent {

std::string EscapeField(absl::string_view raw);
absl::StatusOr<std::string> UnescapeField(absl::string_view escaped);

std::string FormatRecord(const Document& doc);
std::string FormatRecord(const Entity& entity);
std::string FormatRecord(const AbstractionMap::Entry& entry);
std::string FormatRecord(const TaskProfile& profile);
std::string FormatRecord(const SanitizedDocument& sanitized);

absl::StatusOr<Document> ParseDocumentRecord(absl::string_view line);
absl::StatusOr<Entity> ParseEntityRecord(absl::string_view line);
absl::StatusOr<AbstractionMap::Entry> ParseAbstractionRecord(absl::string_view line);
absl::StatusOr<TaskProfile> ParseProfileRecord(absl::string_view line);
absl::StatusOr<SanitizedDocument> ParseSanitizedRecord(absl::string_view line);

// Whole abstraction map, one `abstraction` record per entry.
std::string FormatAbstractionMap(const AbstractionMap& map);
absl::StatusOr<AbstractionMap> ParseAbstractionMap(absl::string_view text,
                                                   TaskType task);

}  // namespace splitagent

#endif  // SPLITAGENT_RECORDS_H_
