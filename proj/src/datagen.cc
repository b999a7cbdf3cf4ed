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

#include "splitagent/datagen.h"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "splitagent/gazetteers.h"
#include "splitagent/noise.h"
#include "splitagent/records.h"
#include "splitagent/sanitizer.h"
#include "splitagent/status.h"
#include "splitagent/trace.h"

namespace splitagent {
namespace {

using json = nlohmann::json;

struct SlotNameEntry {
  EntityKind kind;
  const char* name;
};

constexpr SlotNameEntry kSlotNames[] = {
    {EntityKind::kPersonName, "PERSON"},   {EntityKind::kOrgName, "ORG"},
    {EntityKind::kMoneyAmount, "MONEY"},   {EntityKind::kDate, "DATE"},
    {EntityKind::kEmail, "EMAIL"},         {EntityKind::kPhone, "PHONE"},
    {EntityKind::kAccountId, "ACCOUNT"},   {EntityKind::kUrl, "URL"},
    {EntityKind::kPercentage, "PERCENT"},  {EntityKind::kAddress, "ADDRESS"},
    {EntityKind::kCodeIdentifier, "IDENT"}, {EntityKind::kCredential, "CRED"},
};

std::string Thousands(long long v) {
  std::string digits = std::to_string(v);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::vector<std::string> Amounts() {
  // Three values in each quarter of each coarse bucket.
  const long long values[] = {1200,   1850,   2100,   2750,   3400,   4600,   5200,   6100,
                              7300,   7800,   8650,   9400,   12000,  18500,  27000,  34000,
                              41000,  52000,  56000,  63500,  74000,  79000,  88000,  96500,
                              150000, 210000, 300000, 340000, 420000, 510000, 560000, 640000,
                              720000, 790000, 860000, 950000};
  std::vector<std::string> out;
  for (long long v : values) out.push_back("$" + Thousands(v));
  return out;
}

std::vector<std::string> Dates() {
  std::vector<std::string> out;
  for (int m = 0; m < 12; ++m) {
    for (int day : {4 + m % 5, 17 + m % 9}) {
      out.push_back(absl::StrCat(MonthNames()[m], " ", day, ", 2024"));
    }
  }
  return out;
}

std::vector<std::string> Emails() {
  const char* domains[] = {"acme.example", "globex.example", "mail.example", "corp.example"};
  std::vector<std::string> out;
  for (const std::string& name : PersonNames()) {
    std::vector<std::string> parts = absl::StrSplit(name, ' ');
    std::string local = absl::AsciiStrToLower(absl::StrCat(parts[0], ".", parts[1]));
    for (const char* d : domains) out.push_back(absl::StrCat(local, "@", d));
  }
  return out;
}

std::vector<std::string> Phones() {
  std::vector<std::string> out;
  for (int i = 0; i < 32; ++i) {
    out.push_back(absl::StrFormat("555-%03d-%04d", 201 + 7 * i, 1000 + 263 * i));
  }
  return out;
}

std::vector<std::string> Accounts() {
  std::vector<std::string> out;
  for (const char* prefix : {"ACCT", "CUST", "INV"}) {
    for (int i = 0; i < 16; ++i) {
      out.push_back(absl::StrFormat("%s-%06d", prefix, 104729 + 7919 * i + (prefix[0] * 31)));
    }
  }
  return out;
}

std::vector<std::string> Urls() {
  const char* paths[] = {"terms",   "billing", "help/refunds", "status",  "policy/data",
                         "pricing", "support", "docs/api",     "account", "legal/msa",
                         "returns", "privacy"};
  std::vector<std::string> out;
  for (const char* p : paths) out.push_back(absl::StrCat("https://portal.example.com/", p));
  return out;
}

std::vector<std::string> Percentages() {
  std::vector<std::string> out;
  for (const char* p : {"2%", "3%", "4.5%", "5%", "7%", "8.25%", "10%", "12%", "15%", "18%",
                        "20%", "22.5%", "25%", "30%", "35%", "40%", "45%", "60%", "75%", "90%"}) {
    out.push_back(p);
  }
  return out;
}

std::vector<std::string> Addresses() {
  std::vector<std::string> out;
  const int numbers[] = {12, 250, 1200};
  for (const std::string& street : StreetNames()) {
    for (int n : numbers) out.push_back(absl::StrCat(n, " ", street));
  }
  return out;
}

std::vector<std::string> Credentials() {
  std::vector<std::string> out;
  Rng rng(20240101);
  const std::string alphabet = "ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnpqrstuvwxyz23456789";
  for (const char* prefix : {"sk_live_", "ghp_", "AKIA"}) {
    for (int i = 0; i < 4; ++i) {
      std::string s = prefix;
      for (int j = 0; j < 16; ++j) s += alphabet[UniformIndex(rng, alphabet.size())];
      out.push_back(s);
    }
  }
  return out;
}

const std::map<SourceClass, std::vector<std::string>>& Fillers() {
  static const auto* fillers = new std::map<SourceClass, std::vector<std::string>>{
      {SourceClass::kContract,
       {"Either party may terminate this agreement for material breach.",
        "The parties agree that liability is limited to direct damages.",
        "This clause survives termination of the agreement.",
        "Each party shall keep the terms confidential."}},
      {SourceClass::kCode,
       {"for item in items: total += item.value", "if not ready: return None",
        "result = compute(batch, retries=3)", "log.info(\"sync complete\")"}},
      {SourceClass::kFinancial,
       {"Revenue growth remained within the forecast range.",
        "Operating expenses were flat against the prior quarter.",
        "Cash flow from operations supported the dividend.",
        "The balance sheet shows no new liabilities."}},
      {SourceClass::kSupport,
       {"The customer was unhappy with the delay and asked for an update.",
        "Agent apologized and escalated the issue.",
        "Customer confirmed the problem is resolved and was grateful.",
        "The refund request is still pending review."}},
      {SourceClass::kRisk,
       {"Mitigation controls were reviewed by the committee.",
        "Residual exposure remains within appetite.",
        "The vulnerability was tracked for remediation.",
        "Likelihood and impact were reassessed this quarter."}},
      {SourceClass::kCompliance,
       {"The control was tested and no exceptions were noted.",
        "Policy acknowledgement is required from all staff.",
        "Evidence was retained per the audit schedule.",
        "The regulator requested an updated attestation."}},
  };
  return *fillers;
}

const char* Title(SourceClass source) {
  switch (source) {
    case SourceClass::kContract: return "Master Services Agreement";
    case SourceClass::kCode: return "# module: billing service";
    case SourceClass::kFinancial: return "Quarterly Financial Report";
    case SourceClass::kSupport: return "Support Ticket Log";
    case SourceClass::kRisk: return "Risk Register";
    case SourceClass::kCompliance: return "Compliance Audit Notes";
  }
  return "Document";
}

const char* kHeadingTitles[] = {"Payment", "Term", "Scope", "Liability", "Notices", "Records"};

// Base sensitivity the default rules give each kind.
SensitivityLevel BaseLevel(EntityKind kind) {
  static const auto* levels = [] {
    auto* m = new std::map<EntityKind, SensitivityLevel>;
    for (const ExtractionRule& r : DefaultExtractionRules()) m->emplace(r.kind, r.base_sensitivity);
    return m;
  }();
  auto it = levels->find(kind);
  return it == levels->end() ? SensitivityLevel::kConfidential : it->second;
}

SourceClass PickClass(const GenSpec& spec, Rng& rng) {
  double total = 0.0;
  for (const auto& [cls, w] : spec.mix) total += w;
  double x = UniformOpen01(rng) * total;
  SourceClass last = spec.mix.begin()->first;
  for (const auto& [cls, w] : spec.mix) {
    if (w <= 0.0) continue;
    last = cls;
    if (x < w) return cls;
    x -= w;
  }
  return last;
}

// Appends `line` (one template instance) to body, recording the planted
// entities.
void AppendInstance(const std::vector<TemplatePart>& parts, const std::vector<std::string>& values,
                    int template_index, int line_no, std::string& body,
                    std::vector<PlantedEntity>& planted) {
  int slot = 0;
  for (const TemplatePart& part : parts) {
    if (!part.is_slot) {
      body += part.text;
      continue;
    }
    const std::string& v = values[slot];
    PlantedEntity p;
    p.entity = {{body.size(), body.size() + v.size()}, part.kind, v, BaseLevel(part.kind)};
    p.line = line_no;
    p.slot = slot;
    p.template_index = template_index;
    planted.push_back(std::move(p));
    body += v;
    ++slot;
  }
  body += '\n';
}

std::string SourceTag(SourceClass s) { return SourceClassName(s); }

}  // namespace

const char* SlotName(EntityKind kind) {
  for (const auto& e : kSlotNames) {
    if (e.kind == kind) return e.name;
  }
  return "?";
}

std::optional<EntityKind> KindForSlot(absl::string_view slot) {
  for (const auto& e : kSlotNames) {
    if (slot == e.name) return e.kind;
  }
  return std::nullopt;
}

std::vector<TemplatePart> ParseTemplate(absl::string_view tmpl) {
  std::vector<TemplatePart> parts;
  std::string literal;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i);
      if (close != absl::string_view::npos) {
        if (auto kind = KindForSlot(tmpl.substr(i + 1, close - i - 1))) {
          if (!literal.empty()) parts.push_back({false, std::move(literal), {}});
          literal.clear();
          parts.push_back({true, "", *kind});
          i = close + 1;
          continue;
        }
      }
    }
    literal += tmpl[i++];
  }
  if (!literal.empty()) parts.push_back({false, std::move(literal), {}});
  return parts;
}

SideInfo DefaultSideInfo() {
  using K = EntityKind;
  SideInfo info;
  info.dictionaries = {
      {K::kPersonName, PersonNames()}, {K::kOrgName, OrgNames()},
      {K::kMoneyAmount, Amounts()},    {K::kDate, Dates()},
      {K::kEmail, Emails()},           {K::kPhone, Phones()},
      {K::kAccountId, Accounts()},     {K::kUrl, Urls()},
      {K::kPercentage, Percentages()}, {K::kAddress, Addresses()},
      {K::kCodeIdentifier, CodeIdentifiers()}, {K::kCredential, Credentials()},
  };
  info.templates = {
      {SourceClass::kContract,
       {"{ORG} will pay {MONEY} by {DATE}.",
        "The agreement between {ORG} and {ORG} starts on {DATE}.",
        "Invoices are sent to {PERSON} at {EMAIL}.",
        "The fee increases by {PERCENT} on {DATE}.",
        "Notices go to {ADDRESS}, attention {PERSON}.",
        "Late payments above {MONEY} accrue interest of {PERCENT}.",
        "Signed for {ORG} by {PERSON}.",
        "The full terms are published at {URL}."}},
      {SourceClass::kCode,
       {"def {IDENT}(batch):  # owner {PERSON}",
        "API_KEY = \"{CRED}\"",
        "# contact {EMAIL} before changing {IDENT}",
        "ENDPOINT = \"{URL}\"",
        "# last reviewed on {DATE} by {PERSON}",
        "client = {IDENT}.connect(retries=3)"}},
      {SourceClass::kFinancial,
       {"Account {ACCOUNT} held by {ORG} shows revenue of {MONEY}.",
        "Quarterly margin reached {PERCENT} according to {PERSON}.",
        "Wire {MONEY} to {ACCOUNT} before {DATE}.",
        "Audit contact: {PERSON}, {PHONE}.",
        "{ORG} reported a cash balance of {MONEY} on {DATE}."}},
      {SourceClass::kSupport,
       {"Customer {PERSON} ({EMAIL}) reported a refund issue on {DATE}.",
        "Callback number {PHONE}; account {ACCOUNT}.",
        "Shipping address: {ADDRESS}.",
        "Charged {MONEY} twice, customer is frustrated.",
        "Help article sent: {URL}",
        "Ticket assigned to {PERSON} on {DATE}."}},
      {SourceClass::kRisk,
       {"{ORG} exposure estimated at {MONEY} with probability {PERCENT}.",
        "Risk owner {PERSON} will review on {DATE}.",
        "Vendor {ORG} holds account {ACCOUNT}.",
        "Incident contact {PERSON} at {PHONE}."}},
      {SourceClass::kCompliance,
       {"{ORG} audit by {PERSON} due {DATE}.",
        "Policy breach reported via {EMAIL}; evidence at {URL}.",
        "Credential {CRED} was found in logs.",
        "Control owner {PERSON} attested on {DATE}."}},
  };
  return info;
}

std::string SideInfoToJson(const SideInfo& info) {
  json root;
  json dicts = json::object();
  for (const auto& [kind, values] : info.dictionaries) dicts[EntityKindName(kind)] = values;
  json templates = json::object();
  for (const auto& [cls, list] : info.templates) templates[SourceClassName(cls)] = list;
  root["dictionaries"] = dicts;
  root["templates"] = templates;
  return root.dump(2) + "\n";
}

absl::StatusOr<SideInfo> ParseSideInfo(absl::string_view text) {
  try {
    const json root = json::parse(text.begin(), text.end());
    SideInfo info;
    for (const auto& [name, values] : root.at("dictionaries").items()) {
      auto kind = ParseEntityKind(name);
      if (!kind) return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown kind ", name));
      info.dictionaries[*kind] = values.get<std::vector<std::string>>();
    }
    for (const auto& [name, list] : root.at("templates").items()) {
      auto cls = ParseSourceClass(name);
      if (!cls) return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown class ", name));
      info.templates[*cls] = list.get<std::vector<std::string>>();
    }
    return info;
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("side info: ", e.what()));
  }
}

absl::Status ValidateGenSpec(const GenSpec& spec) {
  auto bad = [](absl::string_view what) { return MakeError(ErrorKind::kSpecInvalid, what); };
  if (spec.count < 1) return bad("count must be at least 1");
  if (spec.min_bytes < 1024 || spec.max_bytes > 100 * 1024 || spec.min_bytes > spec.max_bytes) {
    return bad("size range must lie within [1 KiB, 100 KiB]");
  }
  if (spec.max_bytes - spec.min_bytes < 256) return bad("size range must span at least 256 bytes");
  if (spec.nesting_depth < 1 || spec.nesting_depth > 4) return bad("nesting depth must be 1..4");
  double total = 0.0;
  for (const auto& [cls, w] : spec.mix) {
    if (!(w >= 0.0)) return bad("mix weights must be non-negative");
    total += w;
    if (w > 0.0) {
      auto it = spec.side_info.templates.find(cls);
      if (it == spec.side_info.templates.end() || it->second.empty()) {
        return bad(absl::StrCat("no templates for ", SourceClassName(cls)));
      }
      for (const std::string& t : it->second) {
        for (const TemplatePart& part : ParseTemplate(t)) {
          if (!part.is_slot) continue;
          auto d = spec.side_info.dictionaries.find(part.kind);
          if (d == spec.side_info.dictionaries.end() || d->second.empty()) {
            return bad(absl::StrCat("empty dictionary for ", EntityKindName(part.kind)));
          }
        }
      }
    }
  }
  if (!(total > 0.0)) return bad("mix needs a positive weight");
  return absl::OkStatus();
}

absl::StatusOr<Corpus> GenerateCorpus(const GenSpec& spec) {
  SPLITAGENT_RETURN_IF_ERROR(ValidateGenSpec(spec));
  Corpus corpus;
  for (int i = 0; i < spec.count; ++i) {
    Rng rng(DeriveSeed(spec.seed, static_cast<std::uint64_t>(i)));
    const SourceClass cls = PickClass(spec, rng);
    Document doc;
    doc.id = absl::StrFormat("%s-%04d", SourceTag(cls), i);
    doc.source_class = cls;
    const std::size_t target =
        spec.min_bytes + UniformIndex(rng, spec.max_bytes - spec.min_bytes + 1);
    const auto& templates = spec.side_info.templates.at(cls);
    const auto& fillers = Fillers().at(cls);
    std::vector<PlantedEntity> planted;
    std::string& body = doc.body;
    body = absl::StrCat(Title(cls), " ", i + 1, "\n");
    int line_no = 1;
    std::vector<int> numbering(static_cast<std::size_t>(spec.nesting_depth), 0);

    while (true) {
      const double roll = UniformOpen01(rng);
      std::string line;
      std::vector<PlantedEntity> line_planted;
      if (roll < 0.12) {
        const int depth = 1 + static_cast<int>(UniformIndex(rng, spec.nesting_depth));
        ++numbering[depth - 1];
        for (int d = depth; d < spec.nesting_depth; ++d) numbering[d] = 0;
        std::string number = std::to_string(std::max(1, numbering[0]));
        for (int d = 1; d < depth; ++d) absl::StrAppend(&number, ".", std::max(1, numbering[d]));
        const char* title = kHeadingTitles[UniformIndex(rng, std::size(kHeadingTitles))];
        line = depth == 1 ? absl::StrCat("Section ", number, ". ", title, "\n")
                          : absl::StrCat(number, " ", title, "\n");
        if (cls == SourceClass::kCode) line = "# " + line;
      } else if (roll < 0.30) {
        line = fillers[UniformIndex(rng, fillers.size())] + "\n";
      } else {
        const int t = static_cast<int>(UniformIndex(rng, templates.size()));
        const auto parts = ParseTemplate(templates[t]);
        std::vector<std::string> values;
        for (const TemplatePart& part : parts) {
          if (!part.is_slot) continue;
          const auto& dict = spec.side_info.dictionaries.at(part.kind);
          values.push_back(dict[UniformIndex(rng, dict.size())]);
        }
        std::string scratch = body;
        AppendInstance(parts, values, t, line_no, scratch, line_planted);
        line = scratch.substr(body.size());
      }
      if (body.size() + line.size() > target) break;
      body += line;
      for (PlantedEntity& p : line_planted) planted.push_back(std::move(p));
      ++line_no;
    }
    // Short filler closes any gap to the minimum without passing the maximum.
    while (body.size() < spec.min_bytes) body += "Noted.\n";
    corpus.annotations.by_document[doc.id] = std::move(planted);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

absl::StatusOr<std::pair<Document, std::vector<PlantedEntity>>> GenerateSibling(
    const Document& doc, const std::vector<PlantedEntity>& planted, const GenSpec& spec,
    const std::vector<EntityKind>& vary, std::uint64_t variant) {
  Rng rng(DeriveSeed(DeriveSeed(spec.seed, doc.id), variant));
  // One injective remapping per varied kind, so repeated values stay
  // repeated and distinct ones stay distinct.
  std::map<EntityKind, std::map<std::string, std::string>> remap;
  for (EntityKind kind : vary) {
    auto d = spec.side_info.dictionaries.find(kind);
    if (d == spec.side_info.dictionaries.end() || d->second.size() < 2) {
      return MakeError(ErrorKind::kSpecInvalid,
                       absl::StrCat("cannot vary ", EntityKindName(kind)));
    }
    std::vector<std::string> perm = d->second;
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[UniformIndex(rng, i + 1)]);
      }
      bool fixed_point = false;
      for (std::size_t i = 0; i < perm.size(); ++i) fixed_point |= perm[i] == d->second[i];
      if (!fixed_point) break;
    }
    for (std::size_t i = 0; i < perm.size(); ++i) remap[kind][d->second[i]] = perm[i];
  }
  Document sibling = doc;
  sibling.id = absl::StrCat(doc.id, "~", variant);
  sibling.body.clear();
  std::vector<PlantedEntity> out;
  std::size_t cursor = 0;
  for (const PlantedEntity& p : planted) {
    sibling.body.append(doc.body, cursor, p.entity.span.start - cursor);
    std::string value = p.entity.surface;
    auto k = remap.find(p.entity.kind);
    if (k != remap.end()) {
      auto v = k->second.find(value);
      if (v != k->second.end()) value = v->second;
    }
    PlantedEntity moved = p;
    moved.entity.span = {sibling.body.size(), sibling.body.size() + value.size()};
    moved.entity.surface = value;
    sibling.body += value;
    cursor = p.entity.span.end;
    out.push_back(std::move(moved));
  }
  sibling.body.append(doc.body, cursor, std::string::npos);
  return std::make_pair(std::move(sibling), std::move(out));
}

double ExtractorRecall(const Corpus& corpus, const Ruleset& rules) {
  std::size_t planted = 0;
  std::size_t found = 0;
  for (const Document& doc : corpus.documents) {
    auto it = corpus.annotations.by_document.find(doc.id);
    if (it == corpus.annotations.by_document.end()) continue;
    std::set<std::tuple<std::size_t, std::size_t, EntityKind>> extracted;
    for (const Entity& e : ExtractEntities(doc, rules)) {
      extracted.emplace(e.span.start, e.span.end, e.kind);
    }
    for (const PlantedEntity& p : it->second) {
      ++planted;
      found += extracted.count({p.entity.span.start, p.entity.span.end, p.entity.kind});
    }
  }
  return planted == 0 ? 1.0 : static_cast<double>(found) / static_cast<double>(planted);
}

absl::Status WriteCorpusDir(const Corpus& corpus, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot create ", dir));
  std::string manifest;
  std::string annotations;
  for (const Document& doc : corpus.documents) {
    SPLITAGENT_RETURN_IF_ERROR(WriteFile(absl::StrCat(dir, "/", doc.id, ".txt"), doc.body));
    absl::StrAppend(&manifest, doc.id, "\t", SourceClassName(doc.source_class), "\n");
    auto it = corpus.annotations.by_document.find(doc.id);
    if (it == corpus.annotations.by_document.end()) continue;
    for (const PlantedEntity& p : it->second) {
      absl::StrAppend(&annotations, doc.id, "\t", p.line, "\t", p.slot, "\t", p.template_index,
                      "\t", FormatRecord(p.entity), "\n");
    }
  }
  SPLITAGENT_RETURN_IF_ERROR(WriteFile(dir + "/manifest.tsv", manifest));
  return WriteFile(dir + "/annotations.tsv", annotations);
}

absl::StatusOr<Corpus> ReadCorpusDir(const std::string& dir) {
  Corpus corpus;
  SPLITAGENT_ASSIGN_OR_RETURN(const std::string manifest, ReadFile(dir + "/manifest.tsv"));
  for (absl::string_view line : absl::StrSplit(manifest, '\n', absl::SkipEmpty())) {
    std::vector<std::string> f = absl::StrSplit(line, '\t');
    auto cls = f.size() == 2 ? ParseSourceClass(f[1]) : std::nullopt;
    if (!cls) return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("bad manifest line: ", line));
    Document doc;
    doc.id = f[0];
    doc.source_class = *cls;
    SPLITAGENT_ASSIGN_OR_RETURN(doc.body, ReadFile(absl::StrCat(dir, "/", doc.id, ".txt")));
    corpus.documents.push_back(std::move(doc));
  }
  auto annotations = ReadFile(dir + "/annotations.tsv");
  if (annotations.ok()) {
    for (absl::string_view line : absl::StrSplit(*annotations, '\n', absl::SkipEmpty())) {
      std::vector<absl::string_view> f = absl::StrSplit(line, absl::MaxSplits('\t', 4));
      PlantedEntity p;
      if (f.size() != 5 || !absl::SimpleAtoi(f[1], &p.line) || !absl::SimpleAtoi(f[2], &p.slot) ||
          !absl::SimpleAtoi(f[3], &p.template_index)) {
        return MakeError(ErrorKind::kSpecInvalid, "bad annotation line");
      }
      SPLITAGENT_ASSIGN_OR_RETURN(p.entity, ParseEntityRecord(f[4]));
      corpus.annotations.by_document[std::string(f[0])].push_back(std::move(p));
    }
  }
  return corpus;
}

absl::StatusOr<GenSpec> ParseGenSpecJson(absl::string_view text) {
  try {
    const json root = json::parse(text.begin(), text.end());
    GenSpec spec;
    if (root.contains("mix")) {
      spec.mix.clear();
      for (const auto& [name, weight] : root.at("mix").items()) {
        auto cls = ParseSourceClass(name);
        if (!cls) return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("unknown class ", name));
        spec.mix[*cls] = weight.get<double>();
      }
    }
    spec.count = root.value("count", spec.count);
    spec.min_bytes = root.value("min_bytes", spec.min_bytes);
    spec.max_bytes = root.value("max_bytes", spec.max_bytes);
    spec.seed = root.value("seed", spec.seed);
    spec.nesting_depth = root.value("nesting_depth", spec.nesting_depth);
    if (root.contains("side_info")) {
      SPLITAGENT_ASSIGN_OR_RETURN(spec.side_info, ParseSideInfo(root.at("side_info").dump()));
    }
    SPLITAGENT_RETURN_IF_ERROR(ValidateGenSpec(spec));
    return spec;
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kSpecInvalid, absl::StrCat("gen spec: ", e.what()));
  }
}

}  // namespace splitagent
