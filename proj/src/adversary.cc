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

#include "splitagent/adversary.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include <boost/regex.hpp>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "splitagent/noise.h"
#include "splitagent/records.h"
#include "splitagent/sanitizer.h"
#include "splitagent/status.h"

namespace splitagent {
namespace {

struct CompiledTemplate {
  std::string id;  // "<class>:<index>"
  std::vector<EntityKind> kinds;
  boost::regex pattern;
};

std::string EscapeRegex(absl::string_view literal) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{}/)";
  std::string out;
  for (char c : literal) {
    if (kSpecial.find(c) != std::string::npos) out += '\\';
    out += c;
  }
  return out;
}

std::vector<CompiledTemplate> CompileTemplates(const SideInfo& info) {
  std::vector<CompiledTemplate> out;
  for (const auto& [cls, list] : info.templates) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      CompiledTemplate t;
      t.id = absl::StrCat(SourceClassName(cls), ":", i);
      std::string re = "^";
      for (const TemplatePart& part : ParseTemplate(list[i])) {
        if (part.is_slot) {
          t.kinds.push_back(part.kind);
          re += "(.+?)";
        } else {
          re += EscapeRegex(part.text);
        }
      }
      re += "$";
      if (t.kinds.empty()) continue;
      t.pattern = boost::regex(re, boost::regex::perl);
      out.push_back(std::move(t));
    }
  }
  return out;
}

// A released token split into its kind and bucket/quarter qualifier.
struct ParsedToken {
  EntityKind kind;
  std::string qualifier;  // "" when the token carries none
};

std::optional<ParsedToken> ParseToken(absl::string_view label, const SanitizerConfig& cfg) {
  if (!IsValidTokenLabel(label)) return std::nullopt;
  const std::size_t underscore = label.find('_');
  auto kind = KindForTokenPrefix(label.substr(0, underscore));
  if (!kind) return std::nullopt;
  const absl::string_view rest = label.substr(underscore + 1);
  std::vector<std::string> qualifiers;
  if (*kind == EntityKind::kMoneyAmount || *kind == EntityKind::kPercentage) {
    for (const BucketBound& b : *kind == EntityKind::kMoneyAmount ? cfg.amount_buckets
                                                                   : cfg.percent_buckets) {
      qualifiers.push_back(b.label);
    }
  } else if (*kind == EntityKind::kDate) {
    qualifiers = {"Q1", "Q2", "Q3", "Q4"};
  }
  std::string best;
  for (const std::string& q : qualifiers) {
    if (absl::StartsWith(rest, q) && q.size() > best.size()) best = q;
  }
  return ParsedToken{*kind, best};
}

std::optional<std::string> QualifierOf(EntityKind kind, absl::string_view surface,
                                       const SanitizerConfig& cfg) {
  if (kind == EntityKind::kMoneyAmount || kind == EntityKind::kPercentage) {
    auto v = ParseNumericValue(kind, surface);
    if (!v) return std::nullopt;
    return BucketLabel(kind == EntityKind::kMoneyAmount ? cfg.amount_buckets : cfg.percent_buckets,
                       *v);
  }
  if (kind == EntityKind::kDate) {
    auto m = ParseMonth(surface);
    if (!m) return std::nullopt;
    return absl::StrCat("Q", (*m - 1) / 3 + 1);
  }
  return std::nullopt;
}

bool Consistent(const ParsedToken& token, absl::string_view candidate,
                const SanitizerConfig& cfg) {
  if (token.qualifier.empty()) return true;
  auto q = QualifierOf(token.kind, candidate, cfg);
  return q && *q == token.qualifier;
}

// How a captured slot value looks to the attacker.
enum class Capture { kClear, kToken, kNoisy, kOther };

struct Observation {
  SlotKey key;
  EntityKind kind;
  std::string text;
  Capture capture = Capture::kOther;
  std::optional<ParsedToken> token;
  double share_epsilon = 0.0;
  std::string group;  // template id, slot and the rest of the line
};

struct AlignedShare {
  std::vector<Observation> slots;
};

bool InDictionary(const SideInfo& info, EntityKind kind, const std::string& text) {
  auto it = info.dictionaries.find(kind);
  return it != info.dictionaries.end() &&
         std::find(it->second.begin(), it->second.end(), text) != it->second.end();
}

Capture Classify(const SideInfo& info, const SanitizerConfig& cfg, EntityKind kind,
                 const std::string& text, const std::set<std::string>& vocab,
                 std::optional<ParsedToken>& token) {
  if (InDictionary(info, kind, text)) return Capture::kClear;
  token = ParseToken(text, cfg);
  if (token && token->kind == kind) {
    if (vocab.count(text)) return Capture::kToken;
    if (!token->qualifier.empty()) return Capture::kNoisy;
    return Capture::kToken;
  }
  token.reset();
  return Capture::kOther;
}

// Best-fitting template for a line: the one with the most slots whose
// capture is a dictionary value or a token of the slot's kind.
AlignedShare Align(const std::string& trace, int share_index, const ContextSharePayload& share,
                   const std::vector<CompiledTemplate>& templates, const SideInfo& info,
                   const SanitizerConfig& cfg) {
  AlignedShare out;
  const std::set<std::string> vocab(share.abstraction_vocab.begin(),
                                    share.abstraction_vocab.end());
  std::vector<std::string> lines = absl::StrSplit(share.sanitized_data, '\n');
  for (int l = 0; l < static_cast<int>(lines.size()); ++l) {
    const std::string& line = lines[l];
    const CompiledTemplate* best = nullptr;
    std::vector<Observation> best_obs;
    int best_score = -1;
    for (const CompiledTemplate& t : templates) {
      boost::smatch m;
      if (!boost::regex_match(line, m, t.pattern)) continue;
      std::vector<Observation> obs;
      int score = 0;
      for (std::size_t s = 0; s < t.kinds.size(); ++s) {
        Observation o;
        o.key = {trace, share_index, l, static_cast<int>(s)};
        o.kind = t.kinds[s];
        o.text = m[s + 1].str();
        o.capture = Classify(info, cfg, o.kind, o.text, vocab, o.token);
        o.share_epsilon = share.privacy_cost;
        if (o.capture != Capture::kOther) ++score;
        obs.push_back(std::move(o));
      }
      if (score > best_score) {
        best_score = score;
        best = &t;
        best_obs = std::move(obs);
      }
    }
    if (best == nullptr) continue;
    for (std::size_t s = 0; s < best_obs.size(); ++s) {
      std::string group = absl::StrCat(best->id, "#", s);
      for (std::size_t o = 0; o < best_obs.size(); ++o) {
        absl::StrAppend(&group, "|",
                        best_obs[o].capture == Capture::kNoisy ? "*" : best_obs[o].text);
      }
      best_obs[s].group = std::move(group);
      out.slots.push_back(std::move(best_obs[s]));
    }
  }
  return out;
}

absl::Status RequireShares(const NamedTraces& traces) {
  for (const auto& [name, trace] : traces) {
    if (!trace.Shares().empty()) return absl::OkStatus();
  }
  return MakeError(ErrorKind::kEmptyTrace, "no CONTEXT_SHARE in any trace");
}

const std::string& PickUniform(const std::vector<std::string>& items, Rng& rng) {
  return items[UniformIndex(rng, items.size())];
}

// Probability that a Laplace-noised value v lands in [lb, ub).
double BucketLikelihood(double v, double lb, double ub, double scale) {
  const double hi = std::isinf(ub) ? 1.0 : LaplaceCdf(ub - v, scale);
  const double lo = std::isinf(lb) ? 0.0 : LaplaceCdf(lb - v, scale);
  return std::max(0.0, hi - lo);
}

std::pair<double, double> BucketRange(const std::vector<BucketBound>& buckets,
                                      const std::string& label) {
  double lower = -std::numeric_limits<double>::infinity();
  for (const BucketBound& b : buckets) {
    if (b.label == label) return {lower, b.upper_bound};
    lower = b.upper_bound;
  }
  return {0.0, 0.0};
}

double Likelihood(const Observation& o, const std::string& candidate, const SanitizerConfig& cfg) {
  switch (o.capture) {
    case Capture::kClear:
      return candidate == o.text ? 1.0 : 0.0;
    case Capture::kToken:
      return Consistent(*o.token, candidate, cfg) ? 1.0 : 0.0;
    case Capture::kNoisy: {
      auto v = ParseNumericValue(o.kind, candidate);
      auto sens = cfg.dp_sensitivity.find(o.kind);
      if (!v || sens == cfg.dp_sensitivity.end() || !(o.share_epsilon > 0.0)) return 1.0;
      const auto& buckets =
          o.kind == EntityKind::kMoneyAmount ? cfg.amount_buckets : cfg.percent_buckets;
      const auto [lb, ub] = BucketRange(buckets, o.token->qualifier);
      return BucketLikelihood(*v, lb, ub, sens->second / o.share_epsilon);
    }
    case Capture::kOther:
      return 1.0;
  }
  return 1.0;
}

bool IsInferenceKind(EntityKind kind) {
  return kind == EntityKind::kMoneyAmount || kind == EntityKind::kDate ||
         kind == EntityKind::kAccountId;
}

}  // namespace

const char* AttackTypeName(AttackType attack) {
  switch (attack) {
    case AttackType::kReconstruction: return "reconstruction";
    case AttackType::kInference: return "inference";
    case AttackType::kLinkability: return "linkability";
  }
  return "?";
}

std::optional<AttackType> ParseAttackType(absl::string_view name) {
  for (AttackType a : kAllAttacks) {
    if (name == AttackTypeName(a)) return a;
  }
  return std::nullopt;
}

std::string FormatSlotKey(const SlotKey& key) {
  return absl::StrCat(key.trace, "/", key.share, "/", key.line, "/", key.slot);
}

std::vector<double> DefaultFineEdges(const SanitizerConfig& cfg) {
  std::vector<double> edges;
  double lower = 0.0;
  for (const BucketBound& b : cfg.amount_buckets) {
    const double upper = std::isinf(b.upper_bound) ? 10.0 * lower : b.upper_bound;
    for (int q = 1; q <= 4; ++q) edges.push_back(lower + (upper - lower) * q / 4.0);
    lower = upper;
  }
  edges.back() = std::numeric_limits<double>::infinity();
  return edges;
}

std::optional<std::string> HiddenAttribute(EntityKind kind, absl::string_view surface,
                                           const std::vector<double>& fine_edges) {
  switch (kind) {
    case EntityKind::kMoneyAmount: {
      auto v = ParseNumericValue(kind, surface);
      if (!v) return std::nullopt;
      std::size_t i = 0;
      while (i + 1 < fine_edges.size() && *v >= fine_edges[i]) ++i;
      return absl::StrCat("fine:", i);
    }
    case EntityKind::kDate: {
      auto m = ParseMonth(surface);
      if (!m) return std::nullopt;
      return absl::StrCat("month:", *m);
    }
    case EntityKind::kAccountId: {
      const std::size_t dash = surface.find('-');
      if (dash == absl::string_view::npos) return std::nullopt;
      return std::string(surface.substr(0, dash));
    }
    default:
      return std::nullopt;
  }
}

absl::StatusOr<std::vector<SlotGuess>> ReconstructionGuesses(const AttackSetup& setup) {
  SPLITAGENT_RETURN_IF_ERROR(RequireShares(setup.traces));
  const auto templates = CompileTemplates(setup.side_info);
  std::vector<SlotGuess> guesses;
  for (const auto& [name, trace] : setup.traces) {
    Rng rng(DeriveSeed(setup.rng_seed, name));
    const auto shares = trace.Shares();
    for (int s = 0; s < static_cast<int>(shares.size()); ++s) {
      const AlignedShare aligned =
          Align(name, s, shares[s], templates, setup.side_info, setup.config);
      std::set<std::string> clear;
      for (const Observation& o : aligned.slots) {
        if (o.capture == Capture::kClear) clear.insert(o.text);
      }
      // One surface per token, distinct tokens of a kind map to distinct
      // surfaces, and a token never stands for a value shown in clear.
      std::map<std::string, std::string> token_guess;
      std::map<EntityKind, std::set<std::string>> taken;
      for (const Observation& o : aligned.slots) {
        const auto& dict = setup.side_info.dictionaries.at(o.kind);
        std::string guess;
        if (o.capture == Capture::kClear) {
          guess = o.text;
        } else if (o.capture == Capture::kToken) {
          auto known = token_guess.find(o.text);
          if (known != token_guess.end()) {
            guess = known->second;
          } else {
            std::vector<std::string> consistent;
            std::vector<std::string> fresh;
            for (const std::string& c : dict) {
              if (!Consistent(*o.token, c, setup.config)) continue;
              consistent.push_back(c);
              if (!clear.count(c) && !taken[o.kind].count(c)) fresh.push_back(c);
            }
            const auto& pool = !fresh.empty() ? fresh : !consistent.empty() ? consistent : dict;
            guess = PickUniform(pool, rng);
            token_guess[o.text] = guess;
            taken[o.kind].insert(guess);
          }
        } else if (o.capture == Capture::kNoisy) {
          std::vector<std::string> consistent;
          for (const std::string& c : dict) {
            if (Consistent(*o.token, c, setup.config)) consistent.push_back(c);
          }
          guess = PickUniform(consistent.empty() ? dict : consistent, rng);
        } else {
          guess = PickUniform(dict, rng);
        }
        guesses.push_back({o.key, o.kind, std::move(guess)});
      }
    }
  }
  return guesses;
}

absl::StatusOr<std::vector<SlotGuess>> InferenceGuesses(const AttackSetup& setup) {
  SPLITAGENT_RETURN_IF_ERROR(RequireShares(setup.traces));
  const auto templates = CompileTemplates(setup.side_info);
  const std::vector<double> edges =
      setup.amount_fine_edges.empty() ? DefaultFineEdges(setup.config) : setup.amount_fine_edges;
  std::vector<SlotGuess> guesses;
  for (const auto& [name, trace] : setup.traces) {
    Rng rng(DeriveSeed(setup.rng_seed, name));
    // Observations of one hidden value across the trace's shares.
    std::map<std::string, std::vector<Observation>> groups;
    std::vector<std::string> order;
    const auto shares = trace.Shares();
    for (int s = 0; s < static_cast<int>(shares.size()); ++s) {
      AlignedShare aligned = Align(name, s, shares[s], templates, setup.side_info, setup.config);
      for (Observation& o : aligned.slots) {
        if (!IsInferenceKind(o.kind)) continue;
        auto [it, fresh] = groups.try_emplace(o.group);
        if (fresh) order.push_back(o.group);
        it->second.push_back(std::move(o));
      }
    }
    for (const std::string& g : order) {
      const std::vector<Observation>& obs = groups.at(g);
      const EntityKind kind = obs.front().kind;
      std::map<std::string, double> posterior;
      std::map<std::string, double> prior;
      for (const std::string& c : setup.side_info.dictionaries.at(kind)) {
        auto attr = HiddenAttribute(kind, c, edges);
        if (!attr) continue;
        double p = 1.0;
        for (const Observation& o : obs) p *= Likelihood(o, c, setup.config);
        posterior[*attr] += p;
        prior[*attr] += 1.0;
      }
      if (prior.empty()) continue;
      double total = 0.0;
      for (const auto& [a, p] : posterior) total += p;
      const auto& scores = total > 0.0 ? posterior : prior;
      double best = 0.0;
      for (const auto& [a, p] : scores) best = std::max(best, p);
      std::vector<std::string> ties;
      for (const auto& [a, p] : scores) {
        if (p >= best * (1.0 - 1e-12)) ties.push_back(a);
      }
      guesses.push_back({obs.front().key, kind, PickUniform(ties, rng)});
    }
  }
  return guesses;
}

absl::StatusOr<std::vector<LinkGuess>> LinkabilityGuesses(const AttackSetup& setup) {
  if (setup.traces.size() < 2) {
    return MakeError(ErrorKind::kFewerThanTwoTraces, "linkability needs at least two traces");
  }
  SPLITAGENT_RETURN_IF_ERROR(RequireShares(setup.traces));
  // Fingerprint: the multiset of shared words (tokens included) and the
  // total shared size.
  std::map<std::string, std::pair<std::vector<std::string>, std::size_t>> prints;
  for (const auto& [name, trace] : setup.traces) {
    auto& [words, size] = prints[name];
    size = 0;
    for (const ContextSharePayload& share : trace.Shares()) {
      size += share.sanitized_data.size();
      for (absl::string_view w :
           absl::StrSplit(share.sanitized_data, absl::ByAnyChar(" \t\n"), absl::SkipEmpty())) {
        words.emplace_back(w);
      }
    }
    std::sort(words.begin(), words.end());
  }
  std::vector<TracePair> pairs = setup.pairs;
  if (pairs.empty()) {
    for (std::size_t i = 0; i < setup.traces.size(); ++i) {
      for (std::size_t j = i + 1; j < setup.traces.size(); ++j) {
        pairs.emplace_back(setup.traces[i].first, setup.traces[j].first);
      }
    }
  }
  std::vector<LinkGuess> out;
  for (const TracePair& p : pairs) {
    auto a = prints.find(p.first);
    auto b = prints.find(p.second);
    if (a == prints.end() || b == prints.end()) {
      return MakeError(ErrorKind::kSpecInvalid,
                       absl::StrCat("pair ", p.first, ",", p.second, " names an unknown trace"));
    }
    out.push_back({p, a->second == b->second});
  }
  return out;
}

absl::StatusOr<AttackReport> RunAttack(const AttackSetup& setup, const GroundTruth& truth) {
  AttackReport report;
  report.attack = setup.attack;
  auto record = [&](std::string target, std::string guess, std::string expected) {
    AttackTrial trial{std::move(target), std::move(guess), std::move(expected), false};
    trial.success = trial.guess == trial.truth;
    ++report.trials;
    report.successes += trial.success ? 1 : 0;
    report.log.push_back(std::move(trial));
  };
  switch (setup.attack) {
    case AttackType::kReconstruction: {
      SPLITAGENT_ASSIGN_OR_RETURN(const auto guesses, ReconstructionGuesses(setup));
      std::map<SlotKey, std::string> by_key;
      for (const SlotGuess& g : guesses) by_key.emplace(g.key, g.guess);
      std::set<std::string> names;
      for (const auto& [name, trace] : setup.traces) names.insert(name);
      for (const auto& [key, entity] : truth.slots) {
        if (!names.count(key.trace)) continue;
        auto it = by_key.find(key);
        record(FormatSlotKey(key), it == by_key.end() ? "" : it->second, entity.surface);
      }
      break;
    }
    case AttackType::kInference: {
      SPLITAGENT_ASSIGN_OR_RETURN(const auto guesses, InferenceGuesses(setup));
      const std::vector<double> edges = setup.amount_fine_edges.empty()
                                            ? DefaultFineEdges(setup.config)
                                            : setup.amount_fine_edges;
      for (const SlotGuess& g : guesses) {
        auto it = truth.slots.find(g.key);
        if (it == truth.slots.end() || it->second.kind != g.kind) continue;
        auto attr = HiddenAttribute(g.kind, it->second.surface, edges);
        if (!attr) continue;
        record(FormatSlotKey(g.key), g.guess, *attr);
      }
      break;
    }
    case AttackType::kLinkability: {
      SPLITAGENT_ASSIGN_OR_RETURN(const auto guesses, LinkabilityGuesses(setup));
      report.baseline = 0.5;
      for (const LinkGuess& g : guesses) {
        auto it = truth.same_source.find(g.pair);
        if (it == truth.same_source.end()) continue;
        record(absl::StrCat(g.pair.first, "~", g.pair.second), g.same ? "same" : "different",
               it->second ? "same" : "different");
      }
      break;
    }
  }
  report.success_rate =
      report.trials == 0 ? 0.0 : static_cast<double>(report.successes) / report.trials;
  return report;
}

std::string FormatAttackReport(const AttackReport& report) {
  std::string out = absl::StrCat("# attack ", AttackTypeName(report.attack), "\n",
                                 "target\tguess\ttruth\tsuccess\n");
  for (const AttackTrial& t : report.log) {
    absl::StrAppend(&out, EscapeField(t.target), "\t", EscapeField(t.guess), "\t",
                    EscapeField(t.truth), "\t", t.success ? 1 : 0, "\n");
  }
  absl::StrAppend(&out, "# trials ", report.trials, "\n# successes ", report.successes, "\n",
                  absl::StrFormat("# success_rate %.6f\n", report.success_rate));
  if (report.baseline) absl::StrAppend(&out, absl::StrFormat("# baseline %.6f\n", *report.baseline));
  return out;
}

absl::Status WriteGroundTruth(const std::string& dir, const GroundTruth& truth) {
  std::map<std::string, std::string> files;
  for (const auto& [key, entity] : truth.slots) {
    absl::StrAppend(&files[key.trace], key.share, "\t", key.line, "\t", key.slot, "\t",
                    FormatRecord(entity), "\n");
  }
  for (const auto& [name, text] : files) {
    SPLITAGENT_RETURN_IF_ERROR(WriteFile(absl::StrCat(dir, "/", name, ".truth"), text));
  }
  if (!truth.same_source.empty()) {
    std::string links;
    for (const auto& [pair, same] : truth.same_source) {
      absl::StrAppend(&links, pair.first, "\t", pair.second, "\t", same ? "same" : "different",
                      "\n");
    }
    SPLITAGENT_RETURN_IF_ERROR(WriteFile(dir + "/links.truth", links));
  }
  return absl::OkStatus();
}

absl::StatusOr<GroundTruth> ReadGroundTruth(const std::string& dir) {
  GroundTruth truth;
  std::error_code ec;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() == ".truth") paths.push_back(entry.path());
  }
  if (ec) return MakeError(ErrorKind::kIoFailure, absl::StrCat("cannot list ", dir));
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    SPLITAGENT_ASSIGN_OR_RETURN(const std::string text, ReadFile(path.string()));
    const std::string stem = path.stem().string();
    for (absl::string_view line : absl::StrSplit(text, '\n', absl::SkipEmpty())) {
      if (stem == "links") {
        std::vector<std::string> f = absl::StrSplit(line, '\t');
        if (f.size() != 3 || (f[2] != "same" && f[2] != "different")) {
          return MakeError(ErrorKind::kSchemaViolation, "bad links.truth line");
        }
        truth.same_source[{f[0], f[1]}] = f[2] == "same";
        continue;
      }
      std::vector<absl::string_view> f = absl::StrSplit(line, absl::MaxSplits('\t', 3));
      SlotKey key{stem, 0, 0, 0};
      if (f.size() != 4 || !absl::SimpleAtoi(f[0], &key.share) ||
          !absl::SimpleAtoi(f[1], &key.line) || !absl::SimpleAtoi(f[2], &key.slot)) {
        return MakeError(ErrorKind::kSchemaViolation, absl::StrCat("bad truth line in ", stem));
      }
      SPLITAGENT_ASSIGN_OR_RETURN(Entity entity, ParseEntityRecord(f[3]));
      truth.slots.emplace(std::move(key), std::move(entity));
    }
  }
  return truth;
}

}  // namespace splitagent
