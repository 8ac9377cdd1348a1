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

#include "pardaz/gencorpus.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pardaz/error.h"
#include "pardaz/pipeline_config.h"
#include "std_corpus.h"
#include "temp_dir.h"

namespace pardaz {
namespace {

using testing::read_file;
using testing::TempDir;

GeneratorConfig config(double p, std::uint64_t seed = 1) {
  GeneratorConfig cfg;
  cfg.skip_probability = p;
  cfg.rng_seed = seed;
  return cfg;
}

std::string corpus_text(std::size_t n, std::uint64_t seed) {
  std::string text;
  for (const auto& s : testing::standard_sentences(n, seed)) text += s + "\n";
  return text;
}

TEST(GeneratorConfigTest, Defaults) {
  const GeneratorConfig cfg;
  EXPECT_EQ(cfg.skip_probability, 0.1);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(GeneratorConfigTest, RejectsOutOfRangeValues) {
  EXPECT_THROW(validate(config(-0.01)), Error);
  EXPECT_THROW(validate(config(1.5)), Error);
  EXPECT_THROW(validate(config(std::nan(""))), Error);
  GeneratorConfig cfg;
  cfg.jobs = 0;
  EXPECT_THROW(validate(cfg), Error);
}

TEST(BreakSentenceTest, SkipAllCopiesInput) {
  const RuleSet& rs = default_rule_set();
  for (const auto& line : testing::standard_sentences(200, 4)) {
    const TokenSequence std_side = normalize_and_tokenize(line);
    SentenceRng rng(9, 0);
    SiteStats stats;
    const AlignedPair pair = break_sentence(std_side, rs, config(1.0), rng, &stats);
    EXPECT_EQ(pair.colloquial, std_side);
    EXPECT_TRUE(pair.trace.empty());
    EXPECT_EQ(stats.sites, stats.skipped);
  }
}

TEST(BreakSentenceTest, SkipNoneAlwaysConverts) {
  const RuleSet& rs = default_rule_set();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SentenceRng rng(seed, seed * 3);
    const AlignedPair pair = break_sentence({"تهران"}, rs, config(0.0), rng);
    EXPECT_EQ(pair.colloquial, (TokenSequence{"تهرون"}));
    EXPECT_EQ(pair.standard, (TokenSequence{"تهران"}));
    EXPECT_EQ(pair.source_lang_tag, "<fab>");
    EXPECT_EQ(pair.target_lang_tag, "<fa>");
  }
}

TEST(BreakSentenceTest, SkipRateWithinThreeSigma) {
  const RuleSet& rs = default_rule_set();
  SiteStats stats;
  std::uint64_t index = 0;
  for (const auto& line : testing::standard_sentences(20000, 21)) {
    SentenceRng rng(2024, index++);
    break_sentence(normalize_and_tokenize(line), rs, config(0.1), rng, &stats);
    if (stats.sites >= 10000) break;
  }
  ASSERT_GE(stats.sites, 10000u);
  const double n = static_cast<double>(stats.sites);
  const double sigma = std::sqrt(n * 0.1 * 0.9);
  EXPECT_NEAR(static_cast<double>(stats.skipped), 0.1 * n, 3 * sigma);
}

TEST(BreakSentenceTest, ReplayReproducesColloquialSide) {
  const RuleSet& rs = default_rule_set();
  std::uint64_t index = 0;
  for (const auto& line : testing::standard_sentences(3000, 8)) {
    SentenceRng rng(77, index++);
    const AlignedPair pair =
        break_sentence(normalize_and_tokenize(line), rs, config(0.3), rng);
    ASSERT_TRUE(trace_consistent(pair)) << line;
    ASSERT_EQ(replay_trace(pair.standard, pair.trace, rs), pair.colloquial) << line;
  }
}

TEST(SentenceRngTest, StreamDependsOnSeedAndIndexOnly) {
  SentenceRng a(5, 10), b(5, 10), c(5, 11), d(6, 10);
  const auto va = a.next();
  EXPECT_EQ(va, b.next());
  EXPECT_NE(va, c.next());
  EXPECT_NE(va, d.next());
}

TEST(SentenceRngTest, BernoulliEdgeCases) {
  SentenceRng rng(1, 1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}

TEST(TraceFormatTest, RoundTrip) {
  const std::vector<RuleApplication> trace = {{"cm_to_ra", {0, 2}, {0, 1}},
                                              {"an_an", {3, 4}, {2, 3}}};
  const std::string line = format_trace(trace);
  EXPECT_EQ(line, "cm_to_ra:0-2:0-1;an_an:3-4:2-3");
  EXPECT_EQ(parse_trace(line), trace);
  EXPECT_TRUE(parse_trace("").empty());
  EXPECT_EQ(format_trace({}), "");
}

TEST(TraceFormatTest, RejectsMalformedEntries) {
  EXPECT_THROW(parse_trace("r:0-1"), Error);
  EXPECT_THROW(parse_trace("r:1-0:0-1"), Error);
  EXPECT_THROW(parse_trace("r:a-b:0-1"), Error);
  EXPECT_THROW(parse_trace(":0-1:0-1"), Error);
}

TEST(ReplayTraceTest, DetectsTampering) {
  const RuleSet& rs = default_rule_set();
  const TokenSequence std_side = {"تو", "را", "دیدم"};
  EXPECT_THROW(replay_trace(std_side, {{"no_such_rule", {0, 2}, {0, 1}}}, rs), Error);
  EXPECT_THROW(replay_trace(std_side, {{"an_an", {0, 1}, {0, 1}}}, rs), Error);
  EXPECT_EQ(replay_trace(std_side, {{"cm_to_ra", {0, 2}, {0, 1}}}, rs),
            (TokenSequence{"تورو", "دیدم"}));
}

TEST(GenerateCorpusTest, EmptyInputGivesEmptyFiles) {
  TempDir dir;
  std::istringstream in("");
  const auto files = CorpusFiles::for_prefix(dir / "c");
  const CorpusSummary sum =
      generate_corpus(in, files, config(0.1), default_rule_set(), "h");
  EXPECT_EQ(sum.sentences, 0u);
  EXPECT_EQ(read_file(files.colloquial), "");
  EXPECT_EQ(read_file(files.standard), "");
  EXPECT_EQ(read_file(files.trace), "");
  EXPECT_TRUE(std::filesystem::exists(files.meta));
}

TEST(GenerateCorpusTest, SameSeedIsByteIdentical) {
  TempDir dir;
  const std::string text = corpus_text(3000, 12);
  testing::write_file(dir / "in.txt", text);
  GeneratorConfig cfg = config(0.1, 42);
  generate_corpus(dir / "in.txt", dir / "a", cfg);
  generate_corpus(dir / "in.txt", dir / "b", cfg);
  cfg.jobs = 4;
  generate_corpus(dir / "in.txt", dir / "c", cfg);
  for (const char* ext : {".fab", ".fa", ".trace", ".meta"}) {
    const std::string a = read_file(dir.path() / (std::string("a") + ext));
    EXPECT_FALSE(a.empty()) << ext;
    EXPECT_EQ(a, read_file(dir.path() / (std::string("b") + ext))) << ext;
    EXPECT_EQ(a, read_file(dir.path() / (std::string("c") + ext))) << ext;
  }
  cfg.rng_seed = 43;
  generate_corpus(dir / "in.txt", dir / "d", cfg);
  EXPECT_NE(read_file(dir / "a.fab"), read_file(dir / "d.fab"));
}

TEST(GenerateCorpusTest, MalformedLinesAreSkippedWithWarning) {
  TempDir dir;
  std::istringstream in("تو را دیدم\n\xFF\xFE bad\n   \nبه تو گفتم\n");
  std::ostringstream log;
  const auto files = CorpusFiles::for_prefix(dir / "c");
  const CorpusSummary sum =
      generate_corpus(in, files, config(0.0), default_rule_set(), "h", &log);
  EXPECT_EQ(sum.input_lines, 4u);
  EXPECT_EQ(sum.sentences, 2u);
  EXPECT_EQ(sum.malformed, 2u);
  EXPECT_NE(log.str().find("line 2:"), std::string::npos) << log.str();
  EXPECT_NE(log.str().find("line 3:"), std::string::npos) << log.str();
  EXPECT_EQ(read_file(files.colloquial), "تورو دیدم\nبهت گفتم\n");
}

TEST(GenerateCorpusTest, MaxSentencesLimitsOutput) {
  TempDir dir;
  std::istringstream in(corpus_text(50, 2));
  GeneratorConfig cfg = config(0.1);
  cfg.max_sentences = 10;
  const auto files = CorpusFiles::for_prefix(dir / "c");
  const CorpusSummary sum = generate_corpus(in, files, cfg, default_rule_set(), "h");
  EXPECT_EQ(sum.sentences, 10u);
  EXPECT_EQ(read_corpus(dir / "c").size(), 10u);
}

TEST(GenerateCorpusTest, SummaryMatchesFiles) {
  TempDir dir;
  testing::write_file(dir / "in.txt", corpus_text(2000, 31));
  const CorpusSummary sum = generate_corpus(dir / "in.txt", dir / "c", config(0.1, 3));
  const auto pairs = read_corpus(dir / "c");
  ASSERT_EQ(pairs.size(), sum.sentences);
  std::size_t applications = 0;
  std::size_t converted = 0;
  for (const auto& p : pairs) {
    applications += p.trace.size();
    converted += p.trace.empty() ? 0 : 1;
    ASSERT_EQ(replay_trace(p.standard, p.trace, default_rule_set()), p.colloquial);
  }
  EXPECT_EQ(applications, sum.applications);
  EXPECT_EQ(converted, sum.converted_sentences);
  EXPECT_EQ(sum.sites, sum.applications + sum.skipped);

  const std::string meta = read_file(dir / "c.meta");
  EXPECT_NE(meta.find("seed=3\n"), std::string::npos);
  EXPECT_NE(meta.find("skip_probability=0.1\n"), std::string::npos);
  EXPECT_NE(meta.find("rule_hash=" + rule_file_hash({}) + "\n"), std::string::npos);
  EXPECT_NE(meta.find("applications=" + std::to_string(applications) + "\n"),
            std::string::npos);
}

TEST(GenerateCorpusTest, UnreadableInputNamesPath) {
  TempDir dir;
  try {
    generate_corpus(dir / "missing.txt", dir / "c", config(0.1));
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("missing.txt"), std::string::npos);
  }
}

TEST(ReadCorpusTest, MismatchedFilesAreRejected) {
  TempDir dir;
  testing::write_file(dir / "c.fab", "a\nb\n");
  testing::write_file(dir / "c.fa", "a\n");
  testing::write_file(dir / "c.trace", "\n\n");
  EXPECT_THROW(read_corpus(dir / "c"), Error);
  testing::write_file(dir / "c.fa", "a\nb\n");
  testing::write_file(dir / "c.trace", "\nbogus\n");
  EXPECT_THROW(read_corpus(dir / "c"), ParseError);
}

}  // namespace
}  // namespace pardaz
