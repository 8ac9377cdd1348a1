// Copyright 2026 The Pardaz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PARDAZ_RULES_H_
#define PARDAZ_RULES_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pardaz/normalize.h"

namespace pardaz {

// Coarse part-of-speech classes used by rule constraints.
enum class PosClass { kVerb, kNoun, kOther };

// Rule families; each corresponds to one row group of the conversion table.
enum class RuleCategory {
  kAnSuffix,
  kVerbSuffix,
  kVerbForm,
  kHaSuffix,
  kCommon,
  kCaseMarker,
  kAttachPronoun,
  kAstCopula,
  kHastCopula,
  kLexical,
};
inline constexpr std::size_t kRuleCategoryCount = 10;

enum class MatchKind { kExact, kSuffix, kPrefix, kSet, kAny };

// `next*` kinds inspect the following token; `join*` kinds also consume it.
enum class ContextKind {
  kNone,
  kNextExact,
  kNextSet,
  kNextPos,
  kJoinExact,
  kJoinSet,
  kJoinPos,
};

std::string_view to_string(PosClass pos);
std::string_view to_string(RuleCategory category);
std::string_view to_string(MatchKind kind);
std::string_view to_string(ContextKind kind);
std::optional<PosClass> pos_from_string(std::string_view s);
std::optional<RuleCategory> category_from_string(std::string_view s);

// One conversion entry. The replacement is a space-separated template whose
// tokens may use {stem} (affix matches: the token minus the affix), {tok}
// (the current token) and {next} (the consumed next token).
struct RewriteRule {
  std::string id;
  RuleCategory category = RuleCategory::kLexical;
  MatchKind match_kind = MatchKind::kExact;
  // One form for exact/suffix/prefix, several for set, none for any.
  std::vector<std::string> match;
  ContextKind context_kind = ContextKind::kNone;
  std::vector<std::string> context_forms;
  std::vector<PosClass> context_pos;
  // Allowed classes of the current token; empty means unconstrained.
  std::vector<PosClass> pos_constraint;
  std::string replacement;
  bool invertible = true;
  // Set on inverted rules whose colloquial form has several standard
  // readings.
  bool ambiguous = false;

  // Tokens consumed when the rule fires: 2 for join contexts, else 1.
  std::size_t consumed() const;
};

struct RuleSet {
  std::vector<RewriteRule> rules;
  // token -> coarse class, consulted before the affix heuristic.
  std::unordered_map<std::string, PosClass> lexicon;

  const RewriteRule* find(std::string_view id) const;
};

// Half-open token interval [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct RuleApplication {
  std::string rule_id;
  Span source;
  Span target;

  bool operator==(const RuleApplication&) const = default;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual PosClass tag(std::string_view token) const = 0;
};

// Closed-class lexicon lookup, then a verb-prefix heuristic (می / نمی), then
// noun.
class LexiconTagger : public PosTagger {
 public:
  explicit LexiconTagger(const RuleSet& rules) : rules_(rules) {}
  PosClass tag(std::string_view token) const override;

 private:
  const RuleSet& rules_;
};

struct RuleOutput {
  std::size_t consumed = 1;
  TokenSequence tokens;
};

// Tries one rule at position `pos`. Returns nothing when the rule does not
// match or would emit an empty token or an unchanged input.
std::optional<RuleOutput> match_rule(const RewriteRule& rule,
                                     std::span<const std::string> tokens,
                                     std::size_t pos, const PosTagger& tagger);

struct RuleMatch {
  const RewriteRule* rule = nullptr;
  RuleOutput output;
};

// First rule in set order that matches at `pos`.
std::optional<RuleMatch> first_match(const RuleSet& rules,
                                     std::span<const std::string> tokens,
                                     std::size_t pos, const PosTagger& tagger);

RuleSet parse_rules(std::string_view text, std::string_view origin = "<rules>");
RuleSet parse_rule_file(const std::filesystem::path& path);

// The shipped rule set (data/rules/default.rules, compiled in).
std::string_view default_rules_text();
const RuleSet& default_rule_set();

// Serializes one rule as a rule-file line (no trailing newline).
std::string format_rule(const RewriteRule& rule);

struct Rewrite {
  TokenSequence output;
  std::vector<RuleApplication> trace;
};

// Deterministic single left-to-right pass; first matching rule fires at each
// position, unmatched tokens are copied. The trace lists rule firings only;
// positions between them are one-to-one copies.
Rewrite apply_rules(const TokenSequence& seq, const RuleSet& rules);
Rewrite apply_rules(const TokenSequence& seq, const RuleSet& rules,
                    const PosTagger& tagger);

struct Inversion {
  std::vector<RewriteRule> rules;
  bool invertible = true;
  // More than one standard reading for the same colloquial form.
  bool ambiguous = false;
};

// Colloquial -> standard rules for one standard -> colloquial rule.
Inversion invert_rule(const RewriteRule& rule);

// Inverts every invertible rule, flags colliding colloquial forms as
// ambiguous and orders the result most specific first: exact and set
// matches, then longer affixes, then shorter ones; ties keep file order.
RuleSet invert_rule_set(const RuleSet& rules);

// One entry per output region: rule spans plus the implicit 1:1 copies.
struct AlignmentSegment {
  std::string rule_id;  // empty for copies
  Span source;
  Span target;
};

// Expands a rule-only trace into a complete alignment of source length
// `source_len` to target length `target_len`. Throws Error when the trace is
// inconsistent with those lengths.
std::vector<AlignmentSegment> full_alignment(
    const std::vector<RuleApplication>& trace, std::size_t source_len,
    std::size_t target_len);

}  // namespace pardaz

#endif  // PARDAZ_RULES_H_
