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

#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gtest/gtest.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

GenSpec MixedSpec(int count, std::uint64_t seed) {
  GenSpec spec;
  spec.count = count;
  spec.seed = seed;
  spec.mix.clear();
  for (SourceClass c : kAllSourceClasses) spec.mix[c] = 1.0;
  return spec;
}

std::vector<std::string> Lines(const std::string& body) {
  return absl::StrSplit(body, '\n');
}

// Substitutes slot values by plain text replacement, independent of
// ParseTemplate.
std::string Render(std::string tmpl, const std::vector<PlantedEntity>& slots) {
  for (const PlantedEntity& p : slots) {
    const std::size_t open = tmpl.find('{');
    const std::size_t close = tmpl.find('}', open);
    tmpl.replace(open, close - open + 1, p.entity.surface);
  }
  return tmpl;
}

TEST(ParseTemplateTest, SlotsAndLiterals) {
  auto parts = ParseTemplate("{ORG} will pay {MONEY} by {DATE}.");
  ASSERT_EQ(parts.size(), 6u);
  EXPECT_TRUE(parts[0].is_slot);
  EXPECT_EQ(parts[0].kind, EntityKind::kOrgName);
  EXPECT_EQ(parts[1].text, " will pay ");
  EXPECT_EQ(parts[4].kind, EntityKind::kDate);
  EXPECT_EQ(parts[5].text, ".");
  auto unknown = ParseTemplate("a {NOPE} b");
  ASSERT_EQ(unknown.size(), 1u);
  EXPECT_EQ(unknown[0].text, "a {NOPE} b");
}

TEST(GenerateCorpusTest, DeterministicForSeed) {
  auto a = GenerateCorpus(MixedSpec(10, 7));
  auto b = GenerateCorpus(MixedSpec(10, 7));
  auto c = GenerateCorpus(MixedSpec(10, 8));
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->documents, b->documents);
  EXPECT_EQ(a->annotations.by_document, b->annotations.by_document);
  EXPECT_NE(a->documents, c->documents);
}

TEST(GenerateCorpusTest, SizesWithinBounds) {
  GenSpec spec = MixedSpec(40, 3);
  spec.min_bytes = 2048;
  spec.max_bytes = 4096;
  auto corpus = GenerateCorpus(spec);
  ASSERT_TRUE(corpus.ok());
  ASSERT_EQ(corpus->documents.size(), 40u);
  for (const Document& d : corpus->documents) {
    EXPECT_GE(d.body.size(), spec.min_bytes) << d.id;
    EXPECT_LE(d.body.size(), spec.max_bytes) << d.id;
  }
}

TEST(GenerateCorpusTest, PlantedEntitiesRebuildTemplateLines) {
  GenSpec spec;
  spec.count = 5;
  spec.seed = 11;
  auto corpus = GenerateCorpus(spec);
  ASSERT_TRUE(corpus.ok());
  const auto& templates = spec.side_info.templates.at(SourceClass::kContract);
  for (const Document& d : corpus->documents) {
    EXPECT_EQ(d.source_class, SourceClass::kContract);
    const auto lines = Lines(d.body);
    std::map<int, std::vector<PlantedEntity>> by_line;
    for (const PlantedEntity& p : corpus->annotations.by_document.at(d.id)) {
      EXPECT_TRUE(EntityMatchesBody(p.entity, d.body)) << p.entity.surface;
      by_line[p.line].push_back(p);
    }
    ASSERT_FALSE(by_line.empty());
    for (const auto& [line, slots] : by_line) {
      ASSERT_LT(static_cast<std::size_t>(line), lines.size());
      for (std::size_t i = 0; i < slots.size(); ++i) {
        EXPECT_EQ(slots[i].slot, static_cast<int>(i));
        EXPECT_EQ(slots[i].template_index, slots[0].template_index);
      }
      EXPECT_EQ(Render(templates[slots[0].template_index], slots), lines[line]);
    }
  }
}

TEST(GenerateCorpusTest, ExtractorFindsPlantedEntities) {
  GenSpec spec = MixedSpec(60, 5);
  auto corpus = GenerateCorpus(spec);
  ASSERT_TRUE(corpus.ok());
  EXPECT_GE(ExtractorRecall(*corpus, DefaultSanitizerConfig().rules), 0.98);
}

TEST(GenerateCorpusTest, HeadingsRespectNestingDepth) {
  const std::regex nested(R"(^(# )?\d+\.\d+ )");
  const std::regex deepest(R"(^(# )?\d+\.\d+\.\d+\.\d+ )");
  for (int depth : {1, 4}) {
    GenSpec spec = MixedSpec(20, 9);
    spec.nesting_depth = depth;
    auto corpus = GenerateCorpus(spec);
    ASSERT_TRUE(corpus.ok());
    bool saw_nested = false;
    bool saw_deepest = false;
    for (const Document& d : corpus->documents) {
      for (const std::string& line : Lines(d.body)) {
        saw_nested |= std::regex_search(line, nested);
        saw_deepest |= std::regex_search(line, deepest);
      }
    }
    EXPECT_EQ(saw_nested, depth > 1);
    EXPECT_EQ(saw_deepest, depth == 4);
  }
}

TEST(ValidateGenSpecTest, RejectsBadSpecs) {
  auto invalid = [](GenSpec spec) {
    return HasErrorKind(ValidateGenSpec(spec), ErrorKind::kSpecInvalid);
  };
  GenSpec base;
  EXPECT_TRUE(ValidateGenSpec(base).ok());
  GenSpec s = base;
  s.count = 0;
  EXPECT_TRUE(invalid(s));
  s = base;
  s.min_bytes = 512;
  EXPECT_TRUE(invalid(s));
  s = base;
  s.max_bytes = 200 * 1024;
  EXPECT_TRUE(invalid(s));
  s = base;
  s.min_bytes = 2000;
  s.max_bytes = 2100;
  EXPECT_TRUE(invalid(s));
  s = base;
  s.mix = {{SourceClass::kCode, -1.0}};
  EXPECT_TRUE(invalid(s));
  s = base;
  s.mix = {{SourceClass::kCode, 0.0}};
  EXPECT_TRUE(invalid(s));
  s = base;
  s.nesting_depth = 5;
  EXPECT_TRUE(invalid(s));
  s = base;
  s.side_info.dictionaries.erase(EntityKind::kMoneyAmount);
  EXPECT_TRUE(invalid(s));
  EXPECT_FALSE(GenerateCorpus(s).ok());
}

TEST(GenerateSiblingTest, VariesOnlySelectedKinds) {
  GenSpec spec;
  spec.count = 3;
  spec.seed = 21;
  auto corpus = GenerateCorpus(spec);
  ASSERT_TRUE(corpus.ok());
  const Document& doc = corpus->documents[0];
  const auto& planted = corpus->annotations.by_document.at(doc.id);
  auto sibling = GenerateSibling(doc, planted, spec, {EntityKind::kPersonName}, 1);
  ASSERT_TRUE(sibling.ok());
  const auto& [sib, sib_planted] = *sibling;
  ASSERT_EQ(sib_planted.size(), planted.size());
  bool changed = false;
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 0; i < planted.size(); ++i) {
    EXPECT_TRUE(EntityMatchesBody(sib_planted[i].entity, sib.body));
    if (planted[i].entity.kind == EntityKind::kPersonName) {
      EXPECT_NE(sib_planted[i].entity.surface, planted[i].entity.surface);
      auto [it, fresh] = mapping.emplace(planted[i].entity.surface, sib_planted[i].entity.surface);
      EXPECT_EQ(it->second, sib_planted[i].entity.surface);
      changed = true;
    } else {
      EXPECT_EQ(sib_planted[i].entity.surface, planted[i].entity.surface);
    }
  }
  EXPECT_EQ(changed, sib.body != doc.body);
  EXPECT_NE(sib.id, doc.id);
}

TEST(CorpusDirTest, RoundTrip) {
  auto corpus = GenerateCorpus(MixedSpec(6, 4));
  ASSERT_TRUE(corpus.ok());
  const std::string dir =
      (std::filesystem::temp_directory_path() / "splitagent_corpus_test").string();
  std::filesystem::remove_all(dir);
  ASSERT_TRUE(WriteCorpusDir(*corpus, dir).ok());
  auto back = ReadCorpusDir(dir);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->documents, corpus->documents);
  EXPECT_EQ(back->annotations.by_document, corpus->annotations.by_document);
  std::filesystem::remove_all(dir);
}

TEST(SideInfoTest, JsonRoundTrip) {
  const SideInfo info = DefaultSideInfo();
  auto back = ParseSideInfo(SideInfoToJson(info));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(*back, info);
  EXPECT_FALSE(ParseSideInfo("{\"dictionaries\":{\"Nope\":[]},\"templates\":{}}").ok());
}

TEST(GenSpecJsonTest, ParsesAndValidates) {
  auto spec = ParseGenSpecJson(
      R"({"mix":{"support":2,"code":1},"count":4,"min_bytes":1024,"max_bytes":2048,"seed":3})");
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->count, 4);
  EXPECT_DOUBLE_EQ(spec->mix.at(SourceClass::kSupport), 2.0);
  EXPECT_TRUE(HasErrorKind(ParseGenSpecJson(R"({"count":0})").status(), ErrorKind::kSpecInvalid));
  EXPECT_TRUE(HasErrorKind(ParseGenSpecJson("not json").status(), ErrorKind::kSpecInvalid));
}

}  // namespace
}  // namespace splitagent
