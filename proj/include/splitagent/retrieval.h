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

#ifndef SPLITAGENT_RETRIEVAL_H_
#define SPLITAGENT_RETRIEVAL_H_

#include <map>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "splitagent/core_model.h"

namespace splitagent {

struct SearchHit {
  std::string document_id;
  double score = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

// Term-frequency cosine search over lowercased words. Lives on the privacy
// side; only the documents it selects are sanitized and shared.
class RetrievalIndex {
 public:
  RetrievalIndex() = default;
  explicit RetrievalIndex(const std::vector<Document>& corpus);

  void Add(const Document& doc);
  const Document* Find(absl::string_view id) const;
  std::size_t size() const { return docs_.size(); }

  // Up to k hits with score > 0, by descending score then ascending id.
  std::vector<SearchHit> Search(absl::string_view query, std::size_t k) const;

 private:
  struct Entry {
    Document doc;
    std::map<std::string, double> tf;
    double norm = 0.0;
  };
  std::map<std::string, Entry, std::less<>> docs_;
};

}  // namespace splitagent

#endif  // SPLITAGENT_RETRIEVAL_H_
