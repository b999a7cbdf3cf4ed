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

#include "splitagent/gazetteers.h"

namespace splitagent {

const std::vector<std::string>& PersonNames() {
  static const auto* names = new std::vector<std::string>{
      "Alice Johnson",  "Bob Martinez",   "Carol Nguyen",  "David Okafor",
      "Elena Petrova",  "Farid Haddad",   "Grace Kim",     "Hiro Tanaka",
      "Ines Moreau",    "Jonas Weber",    "Kavya Rao",     "Liam Brennan",
      "Maria Garcia",   "Noah Fischer",   "Olivia Brown",  "Pedro Alves",
      "Quinn Taylor",   "Rosa Lindqvist", "Samuel Adeyemi", "Tara Singh",
      "Uma Patel",      "Victor Chen",    "Wendy Ross",    "Yusuf Demir",
  };
  return *names;
}

const std::vector<std::string>& OrgNames() {
  static const auto* names = new std::vector<std::string>{
      "ACME Corp",     "Globex Inc",    "Initech LLC",   "Umbrella Corp",
      "Stark Holdings", "Wayne Group",  "Hooli Inc",     "Vandelay Ltd",
      "Soylent Corp",  "Cyberdyne Inc", "Tyrell Corp",   "Wonka Group",
      "Gringotts Ltd", "Oscorp Inc",    "Aperture LLC",  "Nakatomi Holdings",
  };
  return *names;
}

const std::vector<std::string>& StreetNames() {
  static const auto* names = new std::vector<std::string>{
      "Maple Street", "Oak Avenue",    "Harbor Road",  "Cedar Lane",
      "Summit Drive", "Lakeview Boulevard", "Mill Street", "Pine Avenue",
  };
  return *names;
}

const std::vector<std::string>& CodeIdentifiers() {
  static const auto* names = new std::vector<std::string>{
      "internal_ledger_sync",   "internal_price_engine", "proprietary_risk_model",
      "legacy_billing_bridge",  "internal_auth_gate",    "proprietary_scoring_v2",
      "legacy_export_job",      "internal_quota_guard",
  };
  return *names;
}

const std::vector<std::string>& MonthNames() {
  static const auto* names = new std::vector<std::string>{
      "January", "February", "March",     "April",   "May",      "June",
      "July",    "August",   "September", "October", "November", "December",
  };
  return *names;
}

}  // namespace splitagent
