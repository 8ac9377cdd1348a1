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

#ifndef PARDAZ_GENCORPUS_H_
#define PARDAZ_GENCORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pardaz/normalize.h"
#include "pardaz/rules.h"

namespace pardaz {

inline constexpr std::string_view kColloquialTag = "<fab>";
inline constexpr std::string_view kStandardTag = "<fa>";

struct GeneratorConfig {
  double skip_probability = 0.1;
  std::uint64_t rng_seed = 0;
  // Empty: the shipped rule set.
  std::filesystem::path rule_file;
  std::optional<std::size_t> max_sentences;
  NormalizationConfig normalization;
  // Worker threads; output does not depend on it.
  int jobs = 1;
};

// Validates skip_probability and jobs. Throws Error.
void validate(const GeneratorConfig& cfg);

struct AlignedPair {
  TokenSequence colloquial;
  TokenSequence standard;
  std::vector<RuleApplication> trace;
  std::string source_lang_tag{kColloquialTag};
  std::string target_lang_tag{kStandardTag};
};

// Per-sentence random stream: mt19937_64 seeded from splitmix64 of the run
// seed mixed with the sentence index, so a sentence's draws do not depend
// on how the input is sharded.
class SentenceRng {
 public:
  SentenceRng(std::uint64_t seed, std::uint64_t sentence_index);

  // True with probability p, from one 53-bit uniform draw. Hand-rolled
  // because std::bernoulli_distribution is not portable across libraries.
  bool bernoulli(double p);
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
};

struct SiteStats {
  std::size_t sites = 0;
  std::size_t skipped = 0;
};

// Rewrites one standard sentence. At every position where a rule matches,
// one Bernoulli(skip_probability) variate is drawn; on success the token is
// copied, otherwise the rule fires.
AlignedPair break_sentence(const TokenSequence& standard, const RuleSet& rules,
                           const GeneratorConfig& cfg, SentenceRng& rng,
                           SiteStats* stats = nullptr);
AlignedPair break_sentence(const TokenSequence& standard, const RuleSet& rules,
                           const PosTagger& tagger, const GeneratorConfig& cfg,
                           SentenceRng& rng, SiteStats* stats = nullptr);

// `rule_id:i-j:p-q` entries joined by ';'. Empty trace is an empty line.
std::string format_trace(const std::vector<RuleApplication>& trace);
// Throws Error on malformed entries.
std::vector<RuleApplication> parse_trace(std::string_view line);

// Re-derives the colloquial side from the standard side and a trace by
// re-running each named rule at its source span and copying every other
// token. Throws Error when a rule is unknown, does not match there, or its
// output disagrees with the trace spans.
TokenSequence replay_trace(const TokenSequence& standard,
                           const std::vector<RuleApplication>& trace,
                           const RuleSet& rules);

// Checks the trace against both sides without consulting rules: spans in
// range, ordered, non-overlapping, and copies between them identical.
bool trace_consistent(const AlignedPair& pair);

struct CorpusSummary {
  std::uint64_t seed = 0;
  double skip_probability = 0.1;
  std::string rule_hash;
  std::size_t input_lines = 0;
  std::size_t sentences = 0;
  std::size_t converted_sentences = 0;
  std::size_t applications = 0;
  std::size_t sites = 0;
  std::size_t skipped = 0;
  std::size_t malformed = 0;

  // `key=value` lines, the body of the .meta file.
  std::string to_meta() const;
};

// Paths of the four output files for a prefix.
struct CorpusFiles {
  std::filesystem::path colloquial;  // <prefix>.fab
  std::filesystem::path standard;    // <prefix>.fa
  std::filesystem::path trace;       // <prefix>.trace
  std::filesystem::path meta;        // <prefix>.meta

  static CorpusFiles for_prefix(const std::filesystem::path& prefix);
};

// Reads one sentence per line, normalizes and tokenizes it, breaks it and
// writes the aligned files. Lines that are not valid UTF-8 or are empty
// after normalization are skipped with a warning on `log` naming the line.
// The sentence index seeding each line's random stream is its 0-based
// input line number.
CorpusSummary generate_corpus(std::istream& input, const CorpusFiles& out,
                              const GeneratorConfig& cfg, const RuleSet& rules,
                              std::string_view rule_hash,
                              std::ostream* log = nullptr);

// File-based entry point; loads cfg.rule_file (or the shipped rules).
// Throws IoError naming the path when the input cannot be read.
CorpusSummary generate_corpus(const std::filesystem::path& input,
                              const std::filesystem::path& prefix,
                              const GeneratorConfig& cfg,
                              std::ostream* log = nullptr);

// Reads the aligned files back. Throws ParseError on a malformed trace line
// and Error when the files have different line counts.
std::vector<AlignedPair> read_corpus(const std::filesystem::path& prefix);

}  // namespace pardaz

#endif  // PARDAZ_GENCORPUS_H_
