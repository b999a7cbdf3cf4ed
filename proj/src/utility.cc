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

#include "splitagent/utility.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/strip.h"

namespace splitagent {
namespace {

bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

const std::set<std::string>& TermList(absl::string_view feature_id) {
  static const auto* lists = new std::map<std::string, std::set<std::string>, std::less<>>{
      {"legal_terms",
       {"agreement", "amendment", "arbitration", "breach", "clause", "confidentiality",
        "consent", "damages", "governing", "indemnify", "indemnification", "law",
        "liability", "obligations", "party", "parties", "pay", "payment", "remedy",
        "shall", "term", "terminate", "termination", "warranty", "warranties"}},
      {"finance_terms",
       {"accrual", "asset", "assets", "balance", "budget", "cash", "costs", "debt",
        "depreciation", "dividend", "ebitda", "equity", "expense", "expenses",
        "forecast", "growth", "income", "invoice", "liabilities", "margin", "net",
        "profit", "quarter", "revenue", "variance"}},
      {"sentiment_words",
       {"angry", "appreciate", "disappointed", "frustrated", "frustrating", "grateful",
        "great", "happy", "pleased", "poor", "satisfied", "thanks", "unacceptable",
        "unhappy", "upset", "urgent", "worried"}},
      {"issue_terms",
       {"bug", "cancel", "charge", "crash", "crashes", "delay", "delayed", "error",
        "failed", "failure", "login", "outage", "password", "refund", "reset",
        "timeout", "billing", "shipment"}},
      {"risk_terms",
       {"concentration", "counterparty", "credit", "default", "exposure", "impact",
        "likelihood", "limit", "mitigation", "probability", "rating", "residual",
        "risk", "scenario", "severity", "stress", "threshold", "volatility"}},
      {"compliance_terms",
       {"audit", "control", "controls", "evidence", "exception", "finding", "gdpr",
        "hipaa", "policy", "regulation", "regulatory", "remediation", "requirement",
        "retention", "review", "sox", "violation"}},
  };
  static const auto* empty = new std::set<std::string>();
  auto it = lists->find(feature_id);
  return it == lists->end() ? *empty : it->second;
}

std::vector<std::string> TermItems(absl::string_view feature_id, absl::string_view text) {
  const std::set<std::string>& terms = TermList(feature_id);
  std::vector<std::string> items;
  for (std::string& word : Words(text)) {
    absl::AsciiStrToLower(&word);
    if (terms.count(word) > 0) items.push_back(std::move(word));
  }
  return items;
}

// "1. Payment Terms", "4.2 Liability", "Section 7: Termination".
bool IsHeadingLine(absl::string_view line) {
  line = absl::StripLeadingAsciiWhitespace(line);
  if (absl::StartsWith(line, "Section ") || absl::StartsWith(line, "ARTICLE ")) {
    line.remove_prefix(line.find(' ') + 1);
    return !line.empty() && absl::ascii_isdigit(static_cast<unsigned char>(line[0]));
  }
  std::size_t i = 0;
  while (i < line.size() && (absl::ascii_isdigit(static_cast<unsigned char>(line[i])) ||
                             line[i] == '.')) {
    ++i;
  }
  return i > 0 && absl::ascii_isdigit(static_cast<unsigned char>(line[0])) &&
         i + 1 < line.size() && line[i] == ' ' &&
         absl::ascii_isupper(static_cast<unsigned char>(line[i + 1]));
}

std::vector<std::string> HeadingItems(absl::string_view text) {
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == absl::string_view::npos) end = text.size();
    absl::string_view line = absl::StripAsciiWhitespace(text.substr(pos, end - pos));
    if (IsHeadingLine(line)) items.emplace_back(line);
    pos = end + 1;
  }
  return items;
}

std::vector<std::string> IdentifierItems(absl::string_view text) {
  std::vector<std::string> items;
  for (std::string& word : Words(text)) {
    if (word.find('_') == std::string::npos) continue;
    if (!absl::ascii_islower(static_cast<unsigned char>(word[0]))) continue;
    items.push_back(std::move(word));
  }
  return items;
}

std::vector<std::string> SyntaxItems(absl::string_view text) {
  static constexpr absl::string_view kSyntax = "{}()[];=<>+-*/&|!:,.";
  std::vector<std::string> items;
  for (char c : text) {
    if (kSyntax.find(c) != absl::string_view::npos) items.emplace_back(1, c);
  }
  return items;
}

std::size_t CountOccurrences(absl::string_view text, absl::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != absl::string_view::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

std::vector<std::string> PreservedItems(absl::string_view text, const TaskProfile& profile,
                                        const std::vector<Entity>& entities) {
  std::set<std::string> surfaces;
  for (const Entity& e : entities) {
    if (profile.preserve_kinds.count(e.kind) > 0) surfaces.insert(e.surface);
  }
  std::vector<std::string> items;
  for (const std::string& surface : surfaces) {
    const std::size_t n = CountOccurrences(text, surface);
    for (std::size_t i = 0; i < n; ++i) items.push_back(surface);
  }
  return items;
}

}  // namespace

const std::vector<std::string>& KnownFeatures() {
  static const auto* ids = new std::vector<std::string>{
      "word_retention", "clause_headings", "legal_terms",     "code_identifiers",
      "code_syntax",    "finance_terms",   "sentiment_words", "issue_terms",
      "risk_terms",     "compliance_terms", "preserved_entities"};
  return *ids;
}

bool IsKnownFeature(absl::string_view feature_id) {
  const auto& ids = KnownFeatures();
  return std::find(ids.begin(), ids.end(), feature_id) != ids.end();
}

std::vector<std::string> Words(absl::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsWordByte(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsWordByte(text[j])) ++j;
    words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

std::vector<std::string> FeatureItems(absl::string_view feature_id, absl::string_view text,
                                      const TaskProfile& profile,
                                      const std::vector<Entity>& entities) {
  if (feature_id == "word_retention") return Words(text);
  if (feature_id == "clause_headings") return HeadingItems(text);
  if (feature_id == "code_identifiers") return IdentifierItems(text);
  if (feature_id == "code_syntax") return SyntaxItems(text);
  if (feature_id == "preserved_entities") return PreservedItems(text, profile, entities);
  return TermItems(feature_id, text);
}

std::optional<double> Retention(const std::vector<std::string>& original_items,
                                const std::vector<std::string>& sanitized_items) {
  if (original_items.empty()) return std::nullopt;
  std::map<absl::string_view, std::size_t> available;
  for (const std::string& item : sanitized_items) ++available[item];
  std::size_t kept = 0;
  for (const std::string& item : original_items) {
    auto it = available.find(item);
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++kept;
    }
  }
  return static_cast<double>(kept) / static_cast<double>(original_items.size());
}

UtilityScore EstimateUtility(TaskType task, const Document& original,
                             absl::string_view sanitized_body, const TaskProfile& profile,
                             const std::vector<Entity>& entities) {
  (void)task;
  double weighted = 0.0;
  double weight_total = 0.0;
  for (const UtilityFeature& feature : profile.utility_features) {
    std::optional<double> ratio = Retention(
        FeatureItems(feature.extractor_id, original.body, profile, entities),
        FeatureItems(feature.extractor_id, sanitized_body, profile, entities));
    if (!ratio.has_value()) continue;
    weighted += feature.weight * *ratio;
    weight_total += feature.weight;
  }
  if (weight_total <= 0.0) return UtilityScore{1.0};
  return UtilityScore{std::clamp(weighted / weight_total, 0.0, 1.0)};
}

}  // namespace splitagent
