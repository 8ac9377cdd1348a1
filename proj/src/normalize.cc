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

#include "pardaz/normalize.h"

#include "pardaz/error.h"
#include "pardaz/unicode.h"

namespace pardaz {
namespace {

using unicode::kZwnj;

bool is_format_control(char32_t cp) {
  return cp == 0x200B || cp == 0xFEFF || cp == 0x200E || cp == 0x200F ||
         (cp >= 0x202A && cp <= 0x202E) || (cp >= 0x2066 && cp <= 0x2069);
}

bool is_diacritic(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x0652) || cp == 0x0670;
}

// Returns 0 when the codepoint is dropped.
char32_t map_char(char32_t cp, const NormalizationConfig& cfg) {
  if (cfg.map_arabic_variants) {
    switch (cp) {
      case 0x0643:  // ARABIC LETTER KAF
      case 0x06AA:  // ARABIC LETTER SWASH KAF
        return 0x06A9;
      case 0x064A:  // ARABIC LETTER YEH
      case 0x0649:  // ARABIC LETTER ALEF MAKSURA
        return 0x06CC;
      case 0x06C1:  // ARABIC LETTER HEH GOAL
      case 0x06BE:  // ARABIC LETTER HEH DOACHASHMEE
      case 0x06D5:  // ARABIC LETTER AE
        return 0x0647;
      case 0x0640:  // ARABIC TATWEEL
        return 0;
      default:
        break;
    }
  }
  if (cfg.normalize_digits) {
    if (cp >= U'0' && cp <= U'9') return 0x06F0 + (cp - U'0');
    if (cp >= 0x0660 && cp <= 0x0669) return 0x06F0 + (cp - 0x0660);
  }
  if (cfg.strip_diacritics && is_diacritic(cp)) return 0;
  if (cfg.collapse_whitespace) {
    if (is_format_control(cp)) return 0;
    if (unicode::is_whitespace(cp)) return U' ';
  }
  return cp;
}

bool is_boundary(const std::u32string& s, std::size_t i) {
  if (i >= s.size()) return true;
  return unicode::is_whitespace(s[i]) || is_punctuation(s[i]);
}

// Attaches '.', ',' and the Arabic separators between two digits.
bool is_numeric_separator(char32_t cp) {
  return cp == U'.' || cp == U',' || cp == 0x066B || cp == 0x066C;
}

bool is_opening(std::string_view tok) {
  return tok == "(" || tok == "[" || tok == "{" || tok == "«";
}

bool is_closing(std::string_view tok) {
  static constexpr std::string_view kClosing[] = {
      ".", ",", "!", "?", ";", ":", ")", "]", "}", "»", "،", "؛", "؟", "…"};
  for (auto c : kClosing) {
    if (tok == c) return true;
  }
  return false;
}

bool parse_bool(std::string_view v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw Error("invalid boolean value '" + std::string(v) + "'");
}

}  // namespace

bool is_punctuation(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U'!': case U'?': case U';': case U':':
    case U'"': case U'(': case U')': case U'[': case U']': case U'{':
    case U'}':
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x060C:  // ، ARABIC COMMA
    case 0x061B:  // ؛ ARABIC SEMICOLON
    case 0x061F:  // ؟ ARABIC QUESTION MARK
    case 0x2026:  // …
      return true;
    default:
      return false;
  }
}

std::string normalize_text(std::string_view raw, const NormalizationConfig& cfg) {
  const std::u32string in = unicode::decode(raw);
  std::u32string mapped;
  mapped.reserve(in.size());
  for (char32_t cp : in) {
    if (char32_t m = map_char(cp, cfg); m != 0) mapped.push_back(m);
  }

  std::u32string zw;
  zw.reserve(mapped.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const char32_t cp = mapped[i];
    if (cp != kZwnj) {
      zw.push_back(cp);
      continue;
    }
    if (!cfg.preserve_zwnj) continue;
    std::size_t j = i;
    while (j + 1 < mapped.size() && mapped[j + 1] == kZwnj) ++j;
    const bool at_start = zw.empty() || unicode::is_whitespace(zw.back()) ||
                          is_punctuation(zw.back());
    if (!at_start && !is_boundary(mapped, j + 1)) zw.push_back(kZwnj);
    i = j;
  }

  if (!cfg.collapse_whitespace) return unicode::encode(zw);

  std::u32string out;
  out.reserve(zw.size());
  for (char32_t cp : zw) {
    if (cp == U' ') {
      if (!out.empty() && out.back() != U' ') out.push_back(U' ');
    } else {
      out.push_back(cp);
    }
  }
  if (!out.empty() && out.back() == U' ') out.pop_back();
  return unicode::encode(out);
}

TokenSequence tokenize(std::string_view text) {
  const std::u32string s = unicode::decode(text);
  TokenSequence tokens;
  std::u32string cur;
  auto flush = [&] {
    std::size_t b = 0, e = cur.size();
    while (b < e && cur[b] == kZwnj) ++b;
    while (e > b && cur[e - 1] == kZwnj) --e;
    if (b < e) tokens.push_back(unicode::encode(cur.substr(b, e - b)));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t cp = s[i];
    if (unicode::is_whitespace(cp)) {
      flush();
      continue;
    }
    if (is_punctuation(cp)) {
      const bool numeric = is_numeric_separator(cp) && !cur.empty() &&
                           unicode::is_digit(cur.back()) && i + 1 < s.size() &&
                           unicode::is_digit(s[i + 1]);
      if (!numeric) {
        flush();
        tokens.push_back(unicode::encode(std::u32string(1, cp)));
        continue;
      }
    }
    cur.push_back(cp);
  }
  flush();
  return tokens;
}

std::string detokenize(const TokenSequence& seq) {
  std::string out;
  bool quote_open = false;
  bool attach_next = false;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const std::string& tok = seq[i];
    bool attach = attach_next;
    attach_next = false;
    if (tok == "\"") {
      if (quote_open) {
        attach = true;
      } else {
        attach_next = true;
      }
      quote_open = !quote_open;
    } else if (is_closing(tok)) {
      attach = true;
    } else if (is_opening(tok)) {
      attach_next = true;
    }
    if (i > 0 && !attach) out.push_back(' ');
    out += tok;
  }
  return out;
}

TokenSequence normalize_and_tokenize(std::string_view raw,
                                     const NormalizationConfig& cfg) {
  return tokenize(normalize_text(raw, cfg));
}

bool is_well_formed(const TokenSequence& seq) {
  for (const auto& tok : seq) {
    if (tok.empty()) return false;
    const std::u32string s = unicode::decode(tok);
    if (s.front() == kZwnj || s.back() == kZwnj) return false;
    for (char32_t cp : s) {
      if (unicode::is_whitespace(cp)) return false;
    }
  }
  return true;
}

std::string join_tokens(const TokenSequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out.push_back(' ');
    out += seq[i];
  }
  return out;
}

void apply_normalization_flag(NormalizationConfig& cfg, std::string_view flag) {
  const auto eq = flag.find('=');
  if (eq == std::string_view::npos) {
    throw Error("normalization flag must be key=value: '" + std::string(flag) +
                "'");
  }
  const std::string_view key = flag.substr(0, eq);
  const bool value = parse_bool(flag.substr(eq + 1));
  if (key == "map_arabic_variants") {
    cfg.map_arabic_variants = value;
  } else if (key == "strip_diacritics") {
    cfg.strip_diacritics = value;
  } else if (key == "normalize_digits") {
    cfg.normalize_digits = value;
  } else if (key == "collapse_whitespace") {
    cfg.collapse_whitespace = value;
  } else if (key == "preserve_zwnj") {
    cfg.preserve_zwnj = value;
  } else {
    throw Error("unknown normalization flag '" + std::string(key) + "'");
  }
}

}  // namespace pardaz
