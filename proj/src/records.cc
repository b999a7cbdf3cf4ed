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

#include "splitagent/records.h"

#include <cstdlib>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

absl::Status Malformed(absl::string_view what) {
  return MakeError(ErrorKind::kSchemaViolation, absl::StrCat("record: ", what));
}

std::string Real(double value) { return absl::StrFormat("%.17g", value); }

template <typename Set>
std::string KindSet(const Set& kinds) {
  std::vector<absl::string_view> names;
  for (EntityKind kind : kAllEntityKinds) {
    if (kinds.count(kind) > 0) names.push_back(EntityKindName(kind));
  }
  return absl::StrJoin(names, ",");
}

// Splits a record into its type and the values of `names`, in order.
absl::StatusOr<std::vector<std::string>> Fields(absl::string_view line,
                                                absl::string_view type,
                                                std::initializer_list<absl::string_view> names) {
  std::vector<absl::string_view> parts = absl::StrSplit(line, '\t');
  if (parts.empty() || parts[0] != type) {
    return Malformed(absl::StrCat("expected record type '", type, "'"));
  }
  if (parts.size() != names.size() + 1) {
    return Malformed(absl::StrCat(type, ": expected ", names.size(), " fields, got ",
                                  parts.size() - 1));
  }
  std::vector<std::string> values;
  std::size_t i = 1;
  for (absl::string_view name : names) {
    absl::string_view part = parts[i++];
    if (part.size() <= name.size() || part.substr(0, name.size()) != name ||
        part[name.size()] != '=') {
      return Malformed(absl::StrCat(type, ": expected field '", name, "'"));
    }
    SPLITAGENT_ASSIGN_OR_RETURN(std::string value,
                                UnescapeField(part.substr(name.size() + 1)));
    values.push_back(std::move(value));
  }
  return values;
}

absl::StatusOr<std::size_t> ParseOffset(absl::string_view text) {
  std::uint64_t value = 0;
  if (!absl::SimpleAtoi(text, &value)) return Malformed("bad offset");
  return static_cast<std::size_t>(value);
}

absl::StatusOr<double> ParseReal(absl::string_view text) {
  double value = 0;
  if (!absl::SimpleAtod(text, &value)) return Malformed("bad real");
  return value;
}

absl::StatusOr<std::set<EntityKind>> ParseKindSet(absl::string_view text) {
  std::set<EntityKind> kinds;
  if (text.empty()) return kinds;
  for (absl::string_view name : absl::StrSplit(text, ',')) {
    std::optional<EntityKind> kind = ParseEntityKind(name);
    if (!kind) return Malformed(absl::StrCat("unknown kind ", name));
    kinds.insert(*kind);
  }
  return kinds;
}

absl::StatusOr<Entity> EntityFrom(const std::vector<std::string>& v) {
  Entity entity;
  SPLITAGENT_ASSIGN_OR_RETURN(entity.span.start, ParseOffset(v[0]));
  SPLITAGENT_ASSIGN_OR_RETURN(entity.span.end, ParseOffset(v[1]));
  std::optional<EntityKind> kind = ParseEntityKind(v[2]);
  std::optional<SensitivityLevel> level = ParseSensitivity(v[3]);
  if (!kind || !level) return Malformed("bad kind or sensitivity");
  entity.kind = *kind;
  entity.sensitivity = *level;
  entity.surface = v[4];
  if (entity.span.start >= entity.span.end ||
      entity.span.length() != entity.surface.size()) {
    return Malformed("span does not match surface length");
  }
  return entity;
}

std::string EntityFields(const Entity& e) {
  return absl::StrCat("start=", e.span.start, "\tend=", e.span.end,
                      "\tkind=", EntityKindName(e.kind),
                      "\tsensitivity=", SensitivityName(e.sensitivity),
                      "\tsurface=", EscapeField(e.surface));
}

}  // namespace

std::string EscapeField(absl::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

absl::StatusOr<std::string> UnescapeField(absl::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    if (escaped[i] != '\\') {
      out += escaped[i];
      continue;
    }
    if (++i == escaped.size()) return Malformed("dangling escape");
    switch (escaped[i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: return Malformed("unknown escape");
    }
  }
  return out;
}

std::string FormatRecord(const Document& doc) {
  return absl::StrCat(
      "document\tid=", EscapeField(doc.id),
      "\tsource_class=", SourceClassName(doc.source_class), "\ttask_hint=",
      doc.task_hint ? TaskTypeName(*doc.task_hint) : absl::string_view("-"),
      "\tbody=", EscapeField(doc.body));
}

std::string FormatRecord(const Entity& entity) {
  return absl::StrCat("entity\t", EntityFields(entity));
}

std::string FormatRecord(const AbstractionMap::Entry& entry) {
  return absl::StrCat("abstraction\t", EntityFields(entry.entity),
                      "\ttoken=", EscapeField(entry.token.label));
}

std::string FormatRecord(const TaskProfile& profile) {
  std::vector<std::string> features;
  for (const UtilityFeature& f : profile.utility_features) {
    features.push_back(absl::StrCat(f.extractor_id, ":", Real(f.weight)));
  }
  return absl::StrCat("profile\ttask=", TaskTypeName(profile.task),
                      "\tpreserve=", KindSet(profile.preserve_kinds),
                      "\tabstract=", KindSet(profile.abstract_kinds),
                      "\tnumeric_dp=", KindSet(profile.numeric_dp_fields),
                      "\tfeatures=", absl::StrJoin(features, ","));
}

std::string FormatRecord(const SanitizedDocument& s) {
  return absl::StrCat("sanitized\torigin=", EscapeField(s.origin_id),
                      "\tepsilon_spent=", Real(s.epsilon_spent),
                      "\tutility=", Real(s.utility.value),
                      "\tbody=", EscapeField(s.body));
}

absl::StatusOr<Document> ParseDocumentRecord(absl::string_view line) {
  SPLITAGENT_ASSIGN_OR_RETURN(
      std::vector<std::string> v,
      Fields(line, "document", {"id", "source_class", "task_hint", "body"}));
  Document doc;
  doc.id = v[0];
  std::optional<SourceClass> source = ParseSourceClass(v[1]);
  if (!source) return Malformed("bad source_class");
  doc.source_class = *source;
  if (v[2] != "-") {
    doc.task_hint = ParseTaskType(v[2]);
    if (!doc.task_hint) return Malformed("bad task_hint");
  }
  doc.body = v[3];
  return doc;
}

absl::StatusOr<Entity> ParseEntityRecord(absl::string_view line) {
  SPLITAGENT_ASSIGN_OR_RETURN(
      std::vector<std::string> v,
      Fields(line, "entity", {"start", "end", "kind", "sensitivity", "surface"}));
  return EntityFrom(v);
}

absl::StatusOr<AbstractionMap::Entry> ParseAbstractionRecord(absl::string_view line) {
  SPLITAGENT_ASSIGN_OR_RETURN(
      std::vector<std::string> v,
      Fields(line, "abstraction",
             {"start", "end", "kind", "sensitivity", "surface", "token"}));
  AbstractionMap::Entry entry;
  SPLITAGENT_ASSIGN_OR_RETURN(entry.entity, EntityFrom(v));
  entry.token.label = v[5];
  if (!IsValidTokenLabel(entry.token.label)) return Malformed("bad token label");
  return entry;
}

absl::StatusOr<TaskProfile> ParseProfileRecord(absl::string_view line) {
  SPLITAGENT_ASSIGN_OR_RETURN(
      std::vector<std::string> v,
      Fields(line, "profile",
             {"task", "preserve", "abstract", "numeric_dp", "features"}));
  TaskProfile profile;
  std::optional<TaskType> task = ParseTaskType(v[0]);
  if (!task) return Malformed("bad task");
  profile.task = *task;
  SPLITAGENT_ASSIGN_OR_RETURN(profile.preserve_kinds, ParseKindSet(v[1]));
  SPLITAGENT_ASSIGN_OR_RETURN(profile.abstract_kinds, ParseKindSet(v[2]));
  SPLITAGENT_ASSIGN_OR_RETURN(profile.numeric_dp_fields, ParseKindSet(v[3]));
  if (!v[4].empty()) {
    for (absl::string_view item : absl::StrSplit(v[4], ',')) {
      std::pair<absl::string_view, absl::string_view> kv =
          absl::StrSplit(item, absl::MaxSplits(':', 1));
      UtilityFeature feature;
      feature.extractor_id = std::string(kv.first);
      SPLITAGENT_ASSIGN_OR_RETURN(feature.weight, ParseReal(kv.second));
      profile.utility_features.push_back(std::move(feature));
    }
  }
  return profile;
}

absl::StatusOr<SanitizedDocument> ParseSanitizedRecord(absl::string_view line) {
  SPLITAGENT_ASSIGN_OR_RETURN(
      std::vector<std::string> v,
      Fields(line, "sanitized", {"origin", "epsilon_spent", "utility", "body"}));
  SanitizedDocument s;
  s.origin_id = v[0];
  SPLITAGENT_ASSIGN_OR_RETURN(s.epsilon_spent, ParseReal(v[1]));
  SPLITAGENT_ASSIGN_OR_RETURN(s.utility.value, ParseReal(v[2]));
  s.body = v[3];
  return s;
}

std::string FormatAbstractionMap(const AbstractionMap& map) {
  std::string out;
  for (const AbstractionMap::Entry& entry : map.entries()) {
    absl::StrAppend(&out, FormatRecord(entry), "\n");
  }
  return out;
}

absl::StatusOr<AbstractionMap> ParseAbstractionMap(absl::string_view text,
                                                   TaskType task) {
  AbstractionMap map(task);
  for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
    SPLITAGENT_ASSIGN_OR_RETURN(AbstractionMap::Entry entry,
                                ParseAbstractionRecord(line));
    SPLITAGENT_RETURN_IF_ERROR(map.Add(entry.entity, entry.token));
  }
  return map;
}

}  // namespace splitagent
