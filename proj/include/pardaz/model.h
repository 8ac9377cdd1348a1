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

#ifndef PARDAZ_MODEL_H_
#define PARDAZ_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pardaz/gencorpus.h"
#include "pardaz/ngram_lm.h"
#include "pardaz/normalize.h"

namespace pardaz {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::size_t kMaxSourcePhrase = 2;
inline constexpr std::size_t kMaxTargetPhrase = 3;

struct ModelConfig {
  int lm_order = 3;
  double lm_backoff = 0.4;
  double lm_weight = 1.0;
  // Weight of phrase pairs observed as copied tokens.
  double identity_weight = 0.1;
  // Add-alpha smoothing over the observed candidates of a source phrase.
  double alpha = 0.1;
  // Score of copying a source token that has no table entry.
  double unknown_log_penalty = -9.210340371976184;  // log(1e-4)
};

struct PhraseCandidate {
  TokenSequence target;
  double log_prob = 0.0;
};

// Colloquial phrase (1-2 tokens) -> standard candidates, plus a standard
// language model.
class TransductionModel {
 public:
  TransductionModel() : lm_(3, 0.4) {}
  TransductionModel(ModelConfig config, NgramLm lm);

  const ModelConfig& config() const { return config_; }
  ModelConfig& mutable_config() { return config_; }
  const NgramLm& lm() const { return lm_; }

  // Candidates sorted by target; null when the phrase is unknown.
  const std::vector<PhraseCandidate>* lookup(std::span<const std::string> source) const;

  // Replaces the candidate list of a source phrase.
  void set_candidates(std::span<const std::string> source,
                      std::vector<PhraseCandidate> candidates);

  // Source key (space-joined) -> candidates, in key order.
  const std::map<std::string, std::vector<PhraseCandidate>>& phrase_table() const {
    return table_;
  }

 private:
  ModelConfig config_;
  std::map<std::string, std::vector<PhraseCandidate>> table_;
  NgramLm lm_;
};

// Accumulates integer phrase and n-gram counts from aligned pairs. Rule
// spans yield phrase pairs; copied tokens yield identity pairs, counted
// separately and weighted at estimation time. Trainers over disjoint shards
// can be merged in any order with the same result.
class ModelTrainer {
 public:
  // When `rules` is given, every pair's trace is also replayed against it.
  explicit ModelTrainer(ModelConfig config = {}, const RuleSet* rules = nullptr);

  // Returns false, and counts a rejection, when the trace does not replay.
  bool add(const AlignedPair& pair);
  void merge(const ModelTrainer& other);

  TransductionModel finish() const;

  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }
  // Rule spans longer than the phrase limits; not added to the table.
  std::size_t oversized_spans() const { return oversized_; }

 private:
  struct Counts {
    std::uint64_t rule = 0;
    std::uint64_t identity = 0;
  };
  ModelConfig config_;
  const RuleSet* rules_;
  // source key -> target key -> counts
  std::map<std::string, std::map<std::string, Counts>> pairs_;
  NgramLm lm_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  std::size_t oversized_ = 0;
};

struct TrainingSummary {
  std::size_t pairs = 0;
  std::size_t rejected = 0;
  std::size_t oversized_spans = 0;
  std::size_t phrases = 0;
};

TransductionModel train(const std::vector<AlignedPair>& corpus,
                        const ModelConfig& config = {},
                        const RuleSet* rules = nullptr, int jobs = 1,
                        TrainingSummary* summary = nullptr);

struct DecodeConfig {
  enum class Mode { kGreedy, kBeam };
  Mode mode = Mode::kGreedy;
  int beam_size = 4;
  // Overrides the model's lm_weight when non-negative.
  double lm_weight = -1.0;

  // Beam width actually used: 1 in greedy mode.
  int effective_beam() const;
};

// Hypothesis scores are sums of fixed-point terms: each log-probability
// term (phrase or weighted LM) is rounded to a multiple of kScoreUnit and
// summed as an integer, so a score never depends on the order its terms were
// added and recombination agrees with comparing complete paths.
inline constexpr double kScoreUnit = 0x1p-32;
std::int64_t score_ticks(double log_term);

struct DecodeResult {
  TokenSequence output;
  double score = 0.0;  // ticks * kScoreUnit, exact
};

// Left-to-right stack decoding over segmentations of the input into phrases
// of 1-2 tokens. Score = sum of phrase log-probabilities + lm_weight * sum of
// LM log-scores including </s>. Hypotheses with equal LM state recombine;
// each stack keeps the best beam_size. Ties break on the lexicographically
// smaller output.
DecodeResult decode(const TokenSequence& colloquial, const TransductionModel& model,
                    const DecodeConfig& cfg = {});
TokenSequence standardize(const TokenSequence& colloquial,
                          const TransductionModel& model,
                          const DecodeConfig& cfg = {});

void save_model(const TransductionModel& model, std::ostream& out);
void save_model(const TransductionModel& model, const std::filesystem::path& path);
// Throws FormatError on bad magic, unsupported version or truncation.
TransductionModel load_model(std::istream& in);
TransductionModel load_model(const std::filesystem::path& path);

}  // namespace pardaz

#endif  // PARDAZ_MODEL_H_
