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

#ifndef PARDAZ_UNICODE_H_
#define PARDAZ_UNICODE_H_

#include <string>
#include <string_view>

namespace pardaz::unicode {

inline constexpr char32_t kZwnj = 0x200C;
inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes UTF-8. Ill-formed sequences decode to U+FFFD, one per maximal
// invalid subpart, so the result is always valid.
std::u32string decode(std::string_view utf8);

// True when `utf8` is well-formed UTF-8 without surrogates or overlongs.
bool is_valid(std::string_view utf8);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

bool is_whitespace(char32_t cp);
// ASCII, Arabic-Indic or Extended Arabic-Indic (Persian) digit.
bool is_digit(char32_t cp);

// Number of codepoints in a valid UTF-8 string.
std::size_t length(std::string_view utf8);

}  // namespace pardaz::unicode

#endif  // PARDAZ_UNICODE_H_
