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

#include "pardaz/baseline.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pardaz/error.h"
#include "pardaz/gencorpus.h"
#include "std_corpus.h"

namespace pardaz {
namespace {

const RuleSet& inverted() {
  static const RuleSet inv = invert_rule_set(default_rule_set());
  return inv;
}

BaselinePolicy first_listed() {
  BaselinePolicy p;
  p.ambiguity_resolution = AmbiguityResolution::kFirstListed;
  return p;
}

BaselinePolicy most_frequent(FrequencyTable freq) {
  BaselinePolicy p;
  p.frequency_table = std::move(freq);
  return p;
}

TEST(BaselinePolicyTest, MostFrequentNeedsTable) {
  BaselinePolicy p;
  EXPECT_EQ(p.ambiguity_resolution, AmbiguityResolution::kMostFrequentStandardForm);
  EXPECT_THROW(validate(p), Error);
  EXPECT_THROW(rule_standardize({"x"}, inverted(), p), Error);
  EXPECT_NO_THROW(validate(first_listed()));
  EXPECT_NO_THROW(validate(most_frequent({})));
}

TEST(RuleStandardizeTest, ConversionTableInversions) {
  for (const auto& policy : {first_listed(), most_frequent({})}) {
    EXPECT_EQ(rule_standardize({"تهرون"}, inverted(), policy), (TokenSequence{"تهران"}));
    EXPECT_EQ(rule_standardize({"کمه"}, inverted(), policy),
              (TokenSequence{"کم", "است"}));
    EXPECT_EQ(rule_standardize({"تورو"}, inverted(), policy),
              (TokenSequence{"تو", "را"}));
  }
}

TEST(RuleStandardizeTest, AttestedStandardInputIsUnchanged) {
  const std::vector<std::string> text = {"من به خانه رفتم .", "کتاب خوب است",
                                         "آنها خوشحال هستند"};
  std::stringstream corpus;
  for (const auto& s : text) corpus << join_tokens(normalize_and_tokenize(s)) << '\n';
  const BaselinePolicy policy = most_frequent(count_frequencies(corpus));
  for (const auto& s : text) {
    const TokenSequence in = normalize_and_tokenize(s);
    EXPECT_EQ(rule_standardize(in, inverted(), policy), in) << s;
  }
}

TEST(RuleStandardizeTest, FirstListedOverappliesSuffixInversions) {
  // Without frequencies every token ending in a copula suffix is split.
  EXPECT_EQ(rule_standardize({"رفتم"}, inverted(), first_listed()),
            (TokenSequence{"رفت", "هستم"}));
}

TEST(RuleStandardizeTest, MostFrequentPicksAttestedReading) {
  // اونو reads as آن را or او را; the table decides.
  FrequencyTable freq = {{"او", 50}, {"آن", 5}, {"را", 100}};
  EXPECT_EQ(rule_standardize({"اونو"}, inverted(), most_frequent(freq)),
            (TokenSequence{"او", "را"}));
  freq["آن"] = 500;
  EXPECT_EQ(rule_standardize({"اونو"}, inverted(), most_frequent(freq)),
            (TokenSequence{"آن", "را"}));
  EXPECT_EQ(rule_standardize({"اونو"}, inverted(), first_listed()),
            (TokenSequence{"آن", "را"}));
}

TEST(RuleStandardizeTest, UnchangedTokenWinsWhenMoreFrequent) {
  // "گلا" would invert to "گلها"; a corpus that uses "گلا" itself keeps it.
  const FrequencyTable freq = {{"گلا", 10}, {"گلها", 3}};
  EXPECT_EQ(rule_standardize({"گلا"}, inverted(), most_frequent(freq)),
            (TokenSequence{"گلا"}));
  const FrequencyTable freq2 = {{"گلا", 3}, {"گلها", 10}};
  EXPECT_EQ(rule_standardize({"گلا"}, inverted(), most_frequent(freq2)),
            (TokenSequence{"گلها"}));
}

TEST(RuleStandardizeTest, RecoversUnambiguousBreaks) {
  // Sentences broken at p = 0 come back exactly when every trace rule has an
  // unambiguous inverse, first-match picks that inverse at each converted
  // span, and no inverted rule matches a copied token.
  const RuleSet& rs = default_rule_set();
  const RuleSet& inv = inverted();
  const LexiconTagger tagger(inv);
  GeneratorConfig cfg;
  cfg.skip_probability = 0.0;
  std::size_t checked = 0;
  std::uint64_t index = 0;
  for (const auto& line : testing::standard_sentences(1000, 44)) {
    SentenceRng rng(0, index++);
    const AlignedPair pair = break_sentence(normalize_and_tokenize(line), rs, cfg, rng);
    bool clean = true;
    for (const auto& app : pair.trace) {
      const RewriteRule* r = rs.find(app.rule_id);
      if (!r->invertible) clean = false;
      for (const auto& a : inv.rules) {
        if (a.ambiguous && a.id.rfind(app.rule_id + "~inv", 0) == 0) clean = false;
      }
    }
    std::vector<bool> converted(pair.colloquial.size(), false);
    for (const auto& app : pair.trace) {
      for (auto k = app.target.begin; k < app.target.end; ++k) converted[k] = true;
      const auto m = first_match(inv, pair.colloquial, app.target.begin, tagger);
      if (!m || m->rule->id.rfind(app.rule_id + "~inv", 0) != 0) clean = false;
    }
    for (std::size_t k = 0; k < pair.colloquial.size() && clean; ++k) {
      if (!converted[k] && first_match(inv, pair.colloquial, k, tagger)) clean = false;
    }
    if (!clean) continue;
    EXPECT_EQ(rule_standardize(pair.colloquial, inv, first_listed()), pair.standard)
        << line;
    ++checked;
  }
  EXPECT_GT(checked, 300u);
}

TEST(RuleStandardizeTest, DeterministicAndWellFormed) {
  std::stringstream corpus;
  for (const auto& s : testing::standard_sentences(500, 10)) corpus << s << '\n';
  const FrequencyTable freq = count_frequencies(corpus);
  const BaselinePolicy policy = most_frequent(freq);
  GeneratorConfig cfg;
  std::uint64_t index = 0;
  for (const auto& line : testing::standard_sentences(300, 11)) {
    SentenceRng rng(3, index++);
    const AlignedPair pair =
        break_sentence(normalize_and_tokenize(line), default_rule_set(), cfg, rng);
    const TokenSequence once = rule_standardize(pair.colloquial, inverted(), policy);
    EXPECT_EQ(rule_standardize(pair.colloquial, inverted(), policy), once);
    EXPECT_TRUE(is_well_formed(once)) << line;
  }
}

TEST(CountFrequenciesTest, CountsTokens) {
  std::istringstream in("a b a\n\nb  c\r\n");
  const FrequencyTable f = count_frequencies(in);
  EXPECT_EQ(f.at("a"), 2u);
  EXPECT_EQ(f.at("b"), 2u);
  EXPECT_EQ(f.at("c"), 1u);
  EXPECT_EQ(f.size(), 3u);
  EXPECT_THROW(count_frequencies(std::filesystem::path("/nonexistent/f")), IoError);
}

}  // namespace
}  // namespace pardaz
