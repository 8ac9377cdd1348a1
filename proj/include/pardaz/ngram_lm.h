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

#ifndef PARDAZ_NGRAM_LM_H_
#define PARDAZ_NGRAM_LM_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pardaz/normalize.h"

namespace pardaz {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

// Word n-gram model with stupid backoff:
//   S(w | h) = c(h w) / c(h)           if c(h w) > 0
//            = backoff * S(w | h')     otherwise (h' drops the oldest word)
//   S(w)     = (c(w) + 1) / (N + V + 1)
// where N counts unigram tokens (</s> included, <s> excluded) and V is the
// number of unigram types. c(h) is the number of times h is followed by any
// word, so every sentence contributes <s> as context and </s> as a word.
// Scores are not normalized distributions.
class NgramLm {
 public:
  explicit NgramLm(int order = 3, double backoff = 0.4);

  int order() const { return order_; }
  double backoff() const { return backoff_; }

  void add_sentence(const TokenSequence& sentence);
  // Adds another model's counts; both must have the same order.
  void merge(const NgramLm& other);

  // Sets the count of one n-gram (1..order tokens). Used when loading.
  void set_count(std::span<const std::string> ngram, std::uint64_t count);

  // log S(word | context); only the last order-1 context tokens matter. The
  // context may start with <s>.
  double log_prob(std::span<const std::string> context, std::string_view word) const;
  // Sum over the words of the sentence and </s>, starting from <s>.
  double sentence_log_prob(const TokenSequence& sentence) const;

  std::uint64_t count(std::span<const std::string> ngram) const;
  std::uint64_t total_tokens() const { return total_; }
  std::size_t vocab_size() const { return unigram_types_; }

  // Every stored n-gram as (space-joined tokens, count).
  const std::unordered_map<std::string, std::uint64_t>& ngrams() const {
    return counts_;
  }

 private:
  static std::string key(std::span<const std::string> tokens);
  void bump(const std::string& ngram_key, std::size_t n, std::uint64_t by,
            std::span<const std::string> tokens);

  int order_;
  double backoff_;
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint64_t> context_counts_;
  std::uint64_t total_ = 0;
  std::size_t unigram_types_ = 0;
};

}  // namespace pardaz

#endif  // PARDAZ_NGRAM_LM_H_
