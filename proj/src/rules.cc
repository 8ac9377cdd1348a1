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

#include "pardaz/rules.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "pardaz/error.h"
#include "pardaz/unicode.h"

namespace pardaz {
namespace {

constexpr std::string_view kZwnjUtf8 = "\xE2\x80\x8C";

constexpr std::string_view kCategoryNames[kRuleCategoryCount] = {
    "an_suffix",  "verb_suffix",    "verb_form",  "ha_suffix",   "common",
    "case_marker", "attach_pronoun", "ast_copula", "hast_copula", "lexical"};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

bool starts_with(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(0, p.size()) == p;
}

bool ends_with(std::string_view s, std::string_view p) {
  return s.size() >= p.size() && s.substr(s.size() - p.size()) == p;
}

std::string_view trim_zwnj(std::string_view s) {
  while (starts_with(s, kZwnjUtf8)) s.remove_prefix(kZwnjUtf8.size());
  while (ends_with(s, kZwnjUtf8)) s.remove_suffix(kZwnjUtf8.size());
  return s;
}

std::string remove_zwnj(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, kZwnjUtf8.size()) == kZwnjUtf8) {
      i += kZwnjUtf8.size();
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool is_join(ContextKind k) {
  return k == ContextKind::kJoinExact || k == ContextKind::kJoinSet ||
         k == ContextKind::kJoinPos;
}

bool uses_forms(ContextKind k) {
  return k == ContextKind::kNextExact || k == ContextKind::kNextSet ||
         k == ContextKind::kJoinExact || k == ContextKind::kJoinSet;
}

bool uses_pos(ContextKind k) {
  return k == ContextKind::kNextPos || k == ContextKind::kJoinPos;
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool contains(const std::vector<PosClass>& v, PosClass p) {
  return std::find(v.begin(), v.end(), p) != v.end();
}

// Substitutes {stem}, {tok} and {next}, splits on spaces and trims ZWNJ at
// token edges. Returns nothing if a token ends up empty.
std::optional<TokenSequence> expand(std::string_view tmpl,
                                    std::string_view stem,
                                    std::string_view tok,
                                    std::string_view next) {
  std::string flat;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i);
      const std::string_view name = tmpl.substr(i + 1, close - i - 1);
      if (name == "stem") {
        flat += stem;
      } else if (name == "tok") {
        flat += tok;
      } else if (name == "next") {
        flat += next;
      }
      i = close + 1;
    } else {
      flat.push_back(tmpl[i++]);
    }
  }
  TokenSequence out;
  for (const auto& piece : split(flat, ' ')) {
    const std::string_view t = trim_zwnj(piece);
    if (t.empty()) return std::nullopt;
    out.emplace_back(t);
  }
  return out;
}

std::string unescape(std::string_view s, const std::string& origin,
                     std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '\\' && i + 1 < s.size() && s[i + 1] == 'u') {
      if (i + 6 > s.size()) throw ParseError(origin, line, "truncated \\u escape");
      char32_t cp = 0;
      for (std::size_t k = i + 2; k < i + 6; ++k) {
        const char c = s[k];
        cp <<= 4;
        if (c >= '0' && c <= '9') {
          cp |= c - '0';
        } else if (c >= 'a' && c <= 'f') {
          cp |= c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
          cp |= c - 'A' + 10;
        } else {
          throw ParseError(origin, line, "invalid \\u escape");
        }
      }
      unicode::append(out, cp);
      i += 6;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

std::string escape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, kZwnjUtf8.size()) == kZwnjUtf8) {
      out += "\\u200c";
      i += kZwnjUtf8.size();
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' ||
                    c == '.' || c == '~';
    if (!ok) return false;
  }
  return true;
}

std::optional<MatchKind> match_kind_from_string(std::string_view s) {
  if (s == "exact") return MatchKind::kExact;
  if (s == "suffix") return MatchKind::kSuffix;
  if (s == "prefix") return MatchKind::kPrefix;
  if (s == "set") return MatchKind::kSet;
  if (s == "any") return MatchKind::kAny;
  return std::nullopt;
}

std::optional<ContextKind> context_kind_from_string(std::string_view s) {
  if (s == "-") return ContextKind::kNone;
  if (s == "next") return ContextKind::kNextExact;
  if (s == "next-set") return ContextKind::kNextSet;
  if (s == "next-pos") return ContextKind::kNextPos;
  if (s == "join") return ContextKind::kJoinExact;
  if (s == "join-set") return ContextKind::kJoinSet;
  if (s == "join-pos") return ContextKind::kJoinPos;
  return std::nullopt;
}

std::vector<PosClass> parse_pos_list(std::string_view s,
                                     const std::string& origin,
                                     std::size_t line) {
  std::vector<PosClass> out;
  for (const auto& name : split(s, '|')) {
    const auto p = pos_from_string(name);
    if (!p) throw ParseError(origin, line, "unknown POS class '" + name + "'");
    out.push_back(*p);
  }
  return out;
}

std::string join_pos(const std::vector<PosClass>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back('|');
    out += to_string(v[i]);
  }
  return out;
}

std::string join_forms(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out.push_back('|');
    out += escape(v[i]);
  }
  return out;
}

// Rejects unknown placeholders and placeholders the match kind cannot bind.
void check_template(const RewriteRule& r, const std::string& origin,
                    std::size_t line) {
  const std::string& t = r.replacement;
  if (t.empty() || t.front() == ' ' || t.back() == ' ' ||
      t.find("  ") != std::string::npos) {
    throw ParseError(origin, line,
                     "replacement must be non-empty tokens separated by single spaces");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '}') throw ParseError(origin, line, "unbalanced '}' in replacement");
    if (t[i] != '{') continue;
    const std::size_t close = t.find('}', i);
    if (close == std::string::npos) {
      throw ParseError(origin, line, "unbalanced '{' in replacement");
    }
    const std::string name = t.substr(i + 1, close - i - 1);
    if (name == "stem") {
      if (r.match_kind != MatchKind::kSuffix && r.match_kind != MatchKind::kPrefix) {
        throw ParseError(origin, line, "{stem} requires a suffix or prefix match");
      }
    } else if (name == "next") {
      if (!is_join(r.context_kind)) {
        throw ParseError(origin, line, "{next} requires a join context");
      }
    } else if (name != "tok") {
      throw ParseError(origin, line, "unknown placeholder {" + name + "}");
    }
    i = close;
  }
}

// A rule maps a token to itself when its expansion reproduces the consumed
// input. Checked symbolically with a sentinel standing for the stem.
void check_not_identity(const RewriteRule& r, const std::string& origin,
                        std::size_t line) {
  const std::string sentinel = "\x01";
  std::vector<std::pair<std::string, std::string>> heads;  // (token, stem)
  switch (r.match_kind) {
    case MatchKind::kExact:
    case MatchKind::kSet:
      for (const auto& m : r.match) heads.emplace_back(m, "");
      break;
    case MatchKind::kSuffix:
      heads.emplace_back(sentinel + r.match[0], sentinel);
      break;
    case MatchKind::kPrefix:
      heads.emplace_back(r.match[0] + sentinel, sentinel);
      break;
    case MatchKind::kAny:
      heads.emplace_back(sentinel, "");
      break;
  }
  std::vector<std::string> nexts;
  if (r.context_kind == ContextKind::kJoinExact ||
      r.context_kind == ContextKind::kJoinSet) {
    nexts = r.context_forms;
  } else if (r.context_kind == ContextKind::kJoinPos) {
    nexts.push_back("\x02");
  }
  for (const auto& [tok, stem] : heads) {
    if (nexts.empty()) {
      const auto out = expand(r.replacement, stem, tok, "");
      if (out && *out == TokenSequence{tok}) {
        throw ParseError(origin, line, "rule maps a token to itself");
      }
    }
    for (const auto& n : nexts) {
      const auto out = expand(r.replacement, stem, tok, n);
      if (out && *out == TokenSequence{tok, n}) {
        throw ParseError(origin, line, "rule maps its tokens to themselves");
      }
    }
  }
}

RewriteRule parse_rule_line(const std::vector<std::string>& raw,
                            const std::string& origin, std::size_t line) {
  auto field = [&](std::size_t i) { return unescape(raw[i], origin, line); };
  RewriteRule r;
  r.id = raw[0];
  if (!valid_id(r.id)) {
    throw ParseError(origin, line, "invalid rule id '" + r.id + "'");
  }
  const auto cat = category_from_string(raw[1]);
  if (!cat) throw ParseError(origin, line, "unknown category '" + raw[1] + "'");
  r.category = *cat;

  const auto mk = match_kind_from_string(raw[2]);
  if (!mk) throw ParseError(origin, line, "unknown match kind '" + raw[2] + "'");
  r.match_kind = *mk;
  const std::string match = field(3);
  if (r.match_kind == MatchKind::kAny) {
    if (match != "-") throw ParseError(origin, line, "match kind 'any' takes '-'");
  } else if (r.match_kind == MatchKind::kSet) {
    r.match = split(match, '|');
  } else {
    if (match.find('|') != std::string::npos) {
      throw ParseError(origin, line, "'|' is only valid in set matches");
    }
    r.match = {match};
  }
  for (const auto& m : r.match) {
    if (m.empty() || m == "-") throw ParseError(origin, line, "empty match form");
    if (m.find(' ') != std::string::npos) {
      throw ParseError(origin, line, "match form contains a space");
    }
  }

  const auto ck = context_kind_from_string(raw[4]);
  if (!ck) throw ParseError(origin, line, "unknown context kind '" + raw[4] + "'");
  r.context_kind = *ck;
  const std::string context = field(5);
  if (r.context_kind == ContextKind::kNone) {
    if (context != "-") throw ParseError(origin, line, "context kind '-' takes '-'");
  } else if (uses_pos(r.context_kind)) {
    r.context_pos = parse_pos_list(context, origin, line);
  } else {
    r.context_forms = split(context, '|');
    const bool single = r.context_kind == ContextKind::kNextExact ||
                        r.context_kind == ContextKind::kJoinExact;
    if (single && r.context_forms.size() != 1) {
      throw ParseError(origin, line, "exact context takes a single form");
    }
    for (const auto& f : r.context_forms) {
      if (f.empty() || f.find(' ') != std::string::npos) {
        throw ParseError(origin, line, "invalid context form");
      }
    }
  }

  r.replacement = field(6);
  check_template(r, origin, line);

  if (raw[7] == "1" || raw[7] == "yes") {
    r.invertible = true;
  } else if (raw[7] == "0" || raw[7] == "no") {
    r.invertible = false;
  } else {
    throw ParseError(origin, line, "invertible flag must be 1 or 0");
  }
  if (raw.size() == 9 && raw[8] != "-") {
    r.pos_constraint = parse_pos_list(raw[8], origin, line);
  }
  check_not_identity(r, origin, line);
  return r;
}

std::size_t affix_length(const RewriteRule& r) {
  if (r.match_kind == MatchKind::kSuffix || r.match_kind == MatchKind::kPrefix) {
    return unicode::length(r.match[0]);
  }
  return 0;
}

int kind_rank(MatchKind k) {
  switch (k) {
    case MatchKind::kExact:
    case MatchKind::kSet:
      return 0;
    case MatchKind::kSuffix:
    case MatchKind::kPrefix:
      return 1;
    case MatchKind::kAny:
      return 2;
  }
  return 2;
}

bool shares(const std::vector<PosClass>& a, const std::vector<PosClass>& b) {
  if (a.empty() || b.empty()) return true;
  for (auto p : a) {
    if (contains(b, p)) return true;
  }
  return false;
}

bool shares(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (const auto& f : a) {
    if (contains(b, f)) return true;
  }
  return false;
}

// Whether both rules are triggered by the same colloquial form: equal exact
// forms, equal affixes, or two open matches, with compatible context and POS.
// Nested affixes are not collisions; the specificity order decides those.
bool same_trigger(const RewriteRule& a, const RewriteRule& b) {
  if (!shares(a.pos_constraint, b.pos_constraint)) return false;
  const bool a_exact = kind_rank(a.match_kind) == 0;
  const bool b_exact = kind_rank(b.match_kind) == 0;
  if (a_exact != b_exact) return false;
  if (a_exact) {
    if (!shares(a.match, b.match)) return false;
  } else if (a.match_kind != b.match_kind || a.match != b.match) {
    return false;
  }
  if (a.context_kind == ContextKind::kNone || b.context_kind == ContextKind::kNone) {
    return true;
  }
  if (uses_forms(a.context_kind) && uses_forms(b.context_kind)) {
    return shares(a.context_forms, b.context_forms);
  }
  if (uses_pos(a.context_kind) && uses_pos(b.context_kind)) {
    return shares(a.context_pos, b.context_pos);
  }
  return true;
}

bool same_effect(const RewriteRule& a, const RewriteRule& b) {
  return a.match_kind == b.match_kind && a.match == b.match &&
         a.context_kind == b.context_kind && a.context_forms == b.context_forms &&
         a.context_pos == b.context_pos && a.pos_constraint == b.pos_constraint &&
         a.replacement == b.replacement;
}

// Splits "{stem}R" / "R{stem}" / "{tok}R" into the literal part R. Returns
// nothing when the token has another shape.
std::optional<std::string> literal_around(std::string_view tok,
                                          std::string_view placeholder,
                                          bool placeholder_first) {
  if (placeholder_first) {
    if (!starts_with(tok, placeholder)) return std::nullopt;
    tok.remove_prefix(placeholder.size());
  } else {
    if (!ends_with(tok, placeholder)) return std::nullopt;
    tok.remove_suffix(placeholder.size());
  }
  if (tok.find('{') != std::string_view::npos) return std::nullopt;
  return std::string(tok);
}

bool has_placeholder(std::string_view tok) {
  return tok.find('{') != std::string_view::npos;
}

}  // namespace

std::string_view to_string(PosClass pos) {
  switch (pos) {
    case PosClass::kVerb:
      return "verb";
    case PosClass::kNoun:
      return "noun";
    case PosClass::kOther:
      return "other";
  }
  return "other";
}

std::string_view to_string(RuleCategory category) {
  return kCategoryNames[static_cast<std::size_t>(category)];
}

std::string_view to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::kExact:
      return "exact";
    case MatchKind::kSuffix:
      return "suffix";
    case MatchKind::kPrefix:
      return "prefix";
    case MatchKind::kSet:
      return "set";
    case MatchKind::kAny:
      return "any";
  }
  return "any";
}

std::string_view to_string(ContextKind kind) {
  switch (kind) {
    case ContextKind::kNone:
      return "-";
    case ContextKind::kNextExact:
      return "next";
    case ContextKind::kNextSet:
      return "next-set";
    case ContextKind::kNextPos:
      return "next-pos";
    case ContextKind::kJoinExact:
      return "join";
    case ContextKind::kJoinSet:
      return "join-set";
    case ContextKind::kJoinPos:
      return "join-pos";
  }
  return "-";
}

std::optional<PosClass> pos_from_string(std::string_view s) {
  if (s == "verb") return PosClass::kVerb;
  if (s == "noun") return PosClass::kNoun;
  if (s == "other") return PosClass::kOther;
  return std::nullopt;
}

std::optional<RuleCategory> category_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kRuleCategoryCount; ++i) {
    if (kCategoryNames[i] == s) return static_cast<RuleCategory>(i);
  }
  return std::nullopt;
}

std::size_t RewriteRule::consumed() const { return is_join(context_kind) ? 2 : 1; }

const RewriteRule* RuleSet::find(std::string_view id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

PosClass LexiconTagger::tag(std::string_view token) const {
  if (auto it = rules_.lexicon.find(std::string(token)); it != rules_.lexicon.end()) {
    return it->second;
  }
  const std::string bare = remove_zwnj(token);
  if (auto it = rules_.lexicon.find(bare); it != rules_.lexicon.end()) {
    return it->second;
  }
  // می / نمی verb prefixes followed by at least two more letters.
  static const std::string kMi = "\xD9\x85\xDB\x8C";
  static const std::string kNemi = "\xD9\x86\xD9\x85\xDB\x8C";
  if ((starts_with(bare, kMi) || starts_with(bare, kNemi)) &&
      unicode::length(bare) >= 4) {
    return PosClass::kVerb;
  }
  return PosClass::kNoun;
}

std::optional<RuleOutput> match_rule(const RewriteRule& rule,
                                     std::span<const std::string> tokens,
                                     std::size_t pos, const PosTagger& tagger) {
  if (pos >= tokens.size()) return std::nullopt;
  const std::string& tok = tokens[pos];
  std::string_view stem;
  switch (rule.match_kind) {
    case MatchKind::kExact:
    case MatchKind::kSet:
      if (!contains(rule.match, tok)) return std::nullopt;
      break;
    case MatchKind::kSuffix: {
      const std::string& s = rule.match[0];
      if (tok.size() <= s.size() || !ends_with(tok, s)) return std::nullopt;
      stem = std::string_view(tok).substr(0, tok.size() - s.size());
      while (ends_with(stem, kZwnjUtf8)) stem.remove_suffix(kZwnjUtf8.size());
      if (stem.empty()) return std::nullopt;
      break;
    }
    case MatchKind::kPrefix: {
      const std::string& p = rule.match[0];
      if (tok.size() <= p.size() || !starts_with(tok, p)) return std::nullopt;
      stem = std::string_view(tok).substr(p.size());
      while (starts_with(stem, kZwnjUtf8)) stem.remove_prefix(kZwnjUtf8.size());
      if (stem.empty()) return std::nullopt;
      break;
    }
    case MatchKind::kAny:
      break;
  }
  if (!rule.pos_constraint.empty() &&
      !contains(rule.pos_constraint, tagger.tag(tok))) {
    return std::nullopt;
  }

  std::string_view next;
  if (rule.context_kind != ContextKind::kNone) {
    if (pos + 1 >= tokens.size()) return std::nullopt;
    next = tokens[pos + 1];
    if (uses_forms(rule.context_kind)) {
      if (!contains(rule.context_forms, next)) return std::nullopt;
    } else if (!contains(rule.context_pos, tagger.tag(next))) {
      return std::nullopt;
    }
  }

  auto out = expand(rule.replacement, stem, tok, is_join(rule.context_kind) ? next : "");
  if (!out) return std::nullopt;
  const std::size_t consumed = rule.consumed();
  if (out->size() == consumed &&
      std::equal(out->begin(), out->end(), tokens.begin() + pos)) {
    return std::nullopt;
  }
  return RuleOutput{consumed, std::move(*out)};
}

std::optional<RuleMatch> first_match(const RuleSet& rules,
                                     std::span<const std::string> tokens,
                                     std::size_t pos, const PosTagger& tagger) {
  for (const auto& rule : rules.rules) {
    if (auto out = match_rule(rule, tokens, pos, tagger)) {
      return RuleMatch{&rule, std::move(*out)};
    }
  }
  return std::nullopt;
}

RuleSet parse_rules(std::string_view text, std::string_view origin_view) {
  const std::string origin(origin_view);
  RuleSet rs;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!unicode::is_valid(line)) {
      throw ParseError(origin, line_no, "line is not valid UTF-8");
    }
    const auto fields = split(line, '\t');
    if (fields[0] == "@pos") {
      if (fields.size() != 3) {
        throw ParseError(origin, line_no, "@pos lines take a token and a class");
      }
      const auto p = pos_from_string(fields[2]);
      if (!p) throw ParseError(origin, line_no, "unknown POS class '" + fields[2] + "'");
      const std::string tok = unescape(fields[1], origin, line_no);
      if (tok.empty()) throw ParseError(origin, line_no, "empty lexicon token");
      rs.lexicon[tok] = *p;
    } else {
      if (fields.size() != 8 && fields.size() != 9) {
        throw ParseError(origin, line_no,
                         "expected 8 or 9 tab-separated fields, found " +
                             std::to_string(fields.size()));
      }
      RewriteRule r = parse_rule_line(fields, origin, line_no);
      if (!ids.insert(r.id).second) {
        throw ParseError(origin, line_no, "duplicate rule id '" + r.id + "'");
      }
      rs.rules.push_back(std::move(r));
    }
    if (end == text.size()) break;
  }
  return rs;
}

RuleSet parse_rule_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open rule file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str(), path.string());
}

const RuleSet& default_rule_set() {
  static const RuleSet rs = parse_rules(default_rules_text(), "default.rules");
  return rs;
}

std::string format_rule(const RewriteRule& r) {
  std::string out = r.id;
  out += '\t';
  out += to_string(r.category);
  out += '\t';
  out += to_string(r.match_kind);
  out += '\t';
  out += r.match.empty() ? "-" : join_forms(r.match);
  out += '\t';
  out += to_string(r.context_kind);
  out += '\t';
  if (r.context_kind == ContextKind::kNone) {
    out += "-";
  } else if (uses_pos(r.context_kind)) {
    out += join_pos(r.context_pos);
  } else {
    out += join_forms(r.context_forms);
  }
  out += '\t';
  out += escape(r.replacement);
  out += '\t';
  out += r.invertible ? "1" : "0";
  out += '\t';
  out += r.pos_constraint.empty() ? "-" : join_pos(r.pos_constraint);
  return out;
}

Rewrite apply_rules(const TokenSequence& seq, const RuleSet& rules) {
  return apply_rules(seq, rules, LexiconTagger(rules));
}

Rewrite apply_rules(const TokenSequence& seq, const RuleSet& rules,
                    const PosTagger& tagger) {
  Rewrite result;
  result.output.reserve(seq.size());
  std::size_t i = 0;
  while (i < seq.size()) {
    if (auto m = first_match(rules, seq, i, tagger)) {
      const std::size_t p = result.output.size();
      const std::size_t k = m->output.tokens.size();
      result.trace.push_back(
          {m->rule->id, {i, i + m->output.consumed}, {p, p + k}});
      for (auto& t : m->output.tokens) result.output.push_back(std::move(t));
      i += m->output.consumed;
    } else {
      result.output.push_back(seq[i]);
      ++i;
    }
  }
  return result;
}

Inversion invert_rule(const RewriteRule& r) {
  Inversion inv;
  if (!r.invertible) {
    inv.invertible = false;
    return inv;
  }
  auto fail = [&] {
    inv.rules.clear();
    inv.invertible = false;
    return inv;
  };
  auto make = [&](MatchKind kind, std::string match, ContextKind ck,
                  std::vector<std::string> forms, std::string replacement) {
    RewriteRule out;
    out.category = r.category;
    out.match_kind = kind;
    out.match = {std::move(match)};
    out.context_kind = ck;
    out.context_forms = std::move(forms);
    out.pos_constraint = r.pos_constraint;
    out.replacement = std::move(replacement);
    out.invertible = true;
    inv.rules.push_back(std::move(out));
  };

  const std::vector<std::string> tmpl = split(r.replacement, ' ');
  const bool join = is_join(r.context_kind);
  const bool lookahead = !join && r.context_kind != ContextKind::kNone;
  if (r.context_kind == ContextKind::kJoinPos) return fail();
  if (join && tmpl.size() != 1) return fail();
  for (std::size_t i = 1; i < tmpl.size(); ++i) {
    if (has_placeholder(tmpl[i])) return fail();
  }
  // Colloquial output of a rule with a literal second token becomes a join.
  const ContextKind tail_kind =
      tmpl.size() == 2 ? ContextKind::kJoinExact : r.context_kind;
  std::vector<std::string> tail_forms =
      tmpl.size() == 2 ? std::vector<std::string>{tmpl[1]} : r.context_forms;
  if (tmpl.size() > 2 || (tmpl.size() == 2 && lookahead)) return fail();
  if (!join && tmpl.size() == 1 && !lookahead) tail_forms.clear();

  switch (r.match_kind) {
    case MatchKind::kExact:
    case MatchKind::kSet: {
      const std::vector<std::string> nexts =
          join ? r.context_forms : std::vector<std::string>{""};
      for (const auto& v : r.match) {
        for (const auto& n : nexts) {
          auto out = expand(r.replacement, "", v, n);
          if (!out) return fail();
          const std::string standard = join ? v + " " + n : v;
          if (out->size() == 1) {
            make(MatchKind::kExact, (*out)[0],
                 join ? ContextKind::kNone : r.context_kind,
                 join ? std::vector<std::string>{} : r.context_forms, standard);
          } else if (out->size() == 2 && !lookahead) {
            make(MatchKind::kExact, (*out)[0], ContextKind::kJoinExact,
                 {(*out)[1]}, standard);
          } else {
            return fail();
          }
        }
      }
      break;
    }
    case MatchKind::kSuffix:
    case MatchKind::kPrefix: {
      const bool suffix = r.match_kind == MatchKind::kSuffix;
      const auto lit = literal_around(tmpl[0], "{stem}", suffix);
      if (!lit || lit->empty()) return fail();
      const std::string base = suffix ? "{stem}" + r.match[0] : r.match[0] + "{stem}";
      if (join) {
        for (const auto& n : r.context_forms) {
          make(r.match_kind, *lit, ContextKind::kNone, {}, base + " " + n);
        }
      } else {
        make(r.match_kind, *lit, tail_kind, tail_forms, base);
      }
      break;
    }
    case MatchKind::kAny: {
      const auto lit = literal_around(tmpl[0], "{tok}", true);
      if (!lit || lit->empty()) return fail();
      if (join) {
        for (const auto& n : r.context_forms) {
          make(MatchKind::kSuffix, *lit, ContextKind::kNone, {}, "{stem} " + n);
        }
      } else {
        make(MatchKind::kSuffix, *lit, tail_kind, tail_forms, "{stem}");
      }
      break;
    }
  }
  if (r.context_kind == ContextKind::kNextPos) {
    for (auto& out : inv.rules) {
      if (out.context_kind == ContextKind::kNextPos) out.context_pos = r.context_pos;
    }
  }

  inv.ambiguous = inv.rules.size() > 1;
  for (std::size_t i = 0; i < inv.rules.size(); ++i) {
    inv.rules[i].id = r.id + "~inv";
    if (inv.rules.size() > 1) inv.rules[i].id += std::to_string(i + 1);
    inv.rules[i].ambiguous = inv.ambiguous;
  }
  return inv;
}

RuleSet invert_rule_set(const RuleSet& rules) {
  struct Entry {
    RewriteRule rule;
    std::size_t order;
  };
  std::vector<Entry> entries;
  for (const auto& r : rules.rules) {
    for (auto& inv : invert_rule(r).rules) {
      entries.push_back({std::move(inv), entries.size()});
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const auto& a = entries[i].rule;
      const auto& b = entries[j].rule;
      if (same_effect(a, b) || !same_trigger(a, b)) continue;
      entries[i].rule.ambiguous = true;
      entries[j].rule.ambiguous = true;
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    auto key = [](const Entry& e) {
      const bool ctx = e.rule.context_kind != ContextKind::kNone;
      return std::make_tuple(kind_rank(e.rule.match_kind),
                             -static_cast<long>(affix_length(e.rule)),
                             -static_cast<long>(e.rule.consumed()), ctx ? 0 : 1,
                             e.order);
    };
    return key(a) < key(b);
  });
  RuleSet out;
  out.lexicon = rules.lexicon;
  std::unordered_set<std::string> seen;
  for (auto& e : entries) {
    // Identical rules from different sources collapse to the first.
    const std::string sig = format_rule(e.rule).substr(e.rule.id.size());
    if (!seen.insert(sig).second) continue;
    out.rules.push_back(std::move(e.rule));
  }
  return out;
}

std::vector<AlignmentSegment> full_alignment(
    const std::vector<RuleApplication>& trace, std::size_t source_len,
    std::size_t target_len) {
  std::vector<AlignmentSegment> out;
  std::size_t s = 0, t = 0;
  auto copy_until = [&](std::size_t s_end, std::size_t t_end) {
    if (s_end < s || t_end < t || s_end - s != t_end - t) {
      throw Error("trace gaps differ in length between source and target");
    }
    for (; s < s_end; ++s, ++t) out.push_back({"", {s, s + 1}, {t, t + 1}});
  };
  for (const auto& app : trace) {
    if (app.source.size() == 0 || app.target.size() == 0) {
      throw Error("trace entry '" + app.rule_id + "' has an empty span");
    }
    if (app.source.end > source_len || app.target.end > target_len) {
      throw Error("trace entry '" + app.rule_id + "' is out of range");
    }
    copy_until(app.source.begin, app.target.begin);
    out.push_back({app.rule_id, app.source, app.target});
    s = app.source.end;
    t = app.target.end;
  }
  copy_until(source_len, target_len);
  return out;
}

}  // namespace pardaz
