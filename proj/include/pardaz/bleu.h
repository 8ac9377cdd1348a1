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

#ifndef PARDAZ_BLEU_H_
#define PARDAZ_BLEU_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pardaz/normalize.h"

namespace pardaz {

inline constexpr std::size_t kBleuOrder = 4;

enum class Smoothing { kNone, kExp };

// Corpus-level sufficient statistics; sums over sentences.
struct BleuStats {
  std::array<std::uint64_t, kBleuOrder> matches{};
  std::array<std::uint64_t, kBleuOrder> totals{};
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;

  void add(const TokenSequence& hypothesis, const TokenSequence& reference);
  void merge(const BleuStats& other);
};

struct BleuScore {
  double score = 0.0;  // 0..100
  // Modified n-gram precisions in [0,1], after smoothing.
  std::array<double, kBleuOrder> precisions{};
  double brevity_penalty = 1.0;
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;
  BleuStats stats;

  // "BLEU = 34.2 60.0/40.0/25.0/10.0 (BP = 1.000 ratio = 1.000 hyp_len = 9
  // ref_len = 9)"
  std::string to_string() const;
};

// Same arithmetic as sacrebleu's compute_bleu, including its zero-match early
// exit and log floor. The brevity penalty is 0 for an empty hypothesis side.
BleuScore compute_bleu(const BleuStats& stats, Smoothing smoothing = Smoothing::kExp);

// Throws Error on an empty corpus or mismatched lengths.
BleuScore corpus_bleu(const std::vector<TokenSequence>& hypotheses,
                      const std::vector<TokenSequence>& references,
                      Smoothing smoothing = Smoothing::kExp);

// One decimal place, as in reports.
std::string format_bleu(double score);

}  // namespace pardaz

#endif  // PARDAZ_BLEU_H_
