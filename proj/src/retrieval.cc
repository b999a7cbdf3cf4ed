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

#include "splitagent/retrieval.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/ascii.h"
#include "splitagent/utility.h"

namespace splitagent {
namespace {

std::map<std::string, double> TermFrequencies(absl::string_view text) {
  std::map<std::string, double> tf;
  for (const std::string& w : Words(text)) tf[absl::AsciiStrToLower(w)] += 1.0;
  return tf;
}

double Norm(const std::map<std::string, double>& tf) {
  double sum = 0.0;
  for (const auto& [term, n] : tf) sum += n * n;
  return std::sqrt(sum);
}

}  // namespace

RetrievalIndex::RetrievalIndex(const std::vector<Document>& corpus) {
  for (const Document& doc : corpus) Add(doc);
}

void RetrievalIndex::Add(const Document& doc) {
  Entry entry{doc, TermFrequencies(doc.body), 0.0};
  entry.norm = Norm(entry.tf);
  docs_.insert_or_assign(doc.id, std::move(entry));
}

const Document* RetrievalIndex::Find(absl::string_view id) const {
  auto it = docs_.find(id);
  return it == docs_.end() ? nullptr : &it->second.doc;
}

std::vector<SearchHit> RetrievalIndex::Search(absl::string_view query, std::size_t k) const {
  const auto q = TermFrequencies(query);
  const double q_norm = Norm(q);
  std::vector<SearchHit> hits;
  if (q_norm == 0.0) return hits;
  for (const auto& [id, entry] : docs_) {
    if (entry.norm == 0.0) continue;
    double dot = 0.0;
    for (const auto& [term, n] : q) {
      auto it = entry.tf.find(term);
      if (it != entry.tf.end()) dot += n * it->second;
    }
    if (dot > 0.0) hits.push_back({id, dot / (q_norm * entry.norm)});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.document_id < b.document_id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace splitagent
