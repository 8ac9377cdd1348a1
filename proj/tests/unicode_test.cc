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

#include "pardaz/unicode.h"

#include <gtest/gtest.h>

#include <string>

namespace pardaz::unicode {
namespace {

TEST(UnicodeTest, DecodeEncodeRoundTrip) {
  const std::string text = "abc تهران\u200Cها ۱۲۳ \U0001F600";
  EXPECT_TRUE(is_valid(text));
  EXPECT_EQ(encode(decode(text)), text);
}

TEST(UnicodeTest, LengthCountsCodepoints) {
  EXPECT_EQ(length(""), 0u);
  EXPECT_EQ(length("abc"), 3u);
  EXPECT_EQ(length("تهران"), 5u);
  EXPECT_EQ(length("\U0001F600"), 1u);
}

TEST(UnicodeTest, RejectsIllFormedInput) {
  EXPECT_FALSE(is_valid("\xC0\x80"));          // overlong NUL
  EXPECT_FALSE(is_valid("\xED\xA0\x80"));      // surrogate
  EXPECT_FALSE(is_valid("\xF4\x90\x80\x80"));  // above U+10FFFF
  EXPECT_FALSE(is_valid("\xE2\x82"));          // truncated
  EXPECT_FALSE(is_valid("\x80"));
  EXPECT_TRUE(is_valid(""));
}

TEST(UnicodeTest, IllFormedDecodesToReplacement) {
  const std::u32string d = decode("a\x80" "b");
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[1], kReplacement);
  EXPECT_TRUE(is_valid(encode(decode("\xE2\x82z\xFF"))));
}

TEST(UnicodeTest, AppendWritesEveryLength) {
  std::string out;
  append(out, U'a');
  append(out, 0x06A9);
  append(out, 0x200C);
  append(out, 0x1F600);
  EXPECT_EQ(out, "a\u06A9\u200C\U0001F600");
}

TEST(UnicodeTest, DigitClasses) {
  EXPECT_TRUE(is_digit(U'7'));
  EXPECT_TRUE(is_digit(0x0663));
  EXPECT_TRUE(is_digit(0x06F9));
  EXPECT_FALSE(is_digit(U'a'));
  EXPECT_FALSE(is_digit(0x06CC));
}

TEST(UnicodeTest, WhitespaceClasses) {
  EXPECT_TRUE(is_whitespace(U' '));
  EXPECT_TRUE(is_whitespace(U'\t'));
  EXPECT_TRUE(is_whitespace(U'\n'));
  EXPECT_TRUE(is_whitespace(0x00A0));
  EXPECT_FALSE(is_whitespace(kZwnj));
  EXPECT_FALSE(is_whitespace(U'x'));
}

}  // namespace
}  // namespace pardaz::unicode
