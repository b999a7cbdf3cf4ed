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

#ifndef SPLITAGENT_GAZETTEERS_H_
#define SPLITAGENT_GAZETTEERS_H_

#include <string>
#include <vector>

namespace splitagent {

// Shared surface lists. The extraction rules, the corpus generator and the
// adversary's candidate dictionaries all draw from these.
const std::vector<std::string>& PersonNames();
const std::vector<std::string>& OrgNames();
const std::vector<std::string>& StreetNames();
const std::vector<std::string>& CodeIdentifiers();
const std::vector<std::string>& MonthNames();

}  // namespace splitagent

#endif  // SPLITAGENT_GAZETTEERS_H_
