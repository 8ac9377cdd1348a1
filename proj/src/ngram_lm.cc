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

#include "pardaz/ngram_lm.h"

#include <cmath>

#include "pardaz/error.h"

namespace pardaz {

NgramLm::NgramLm(int order, double backoff) : order_(order), backoff_(backoff) {
  if (order < 1) throw Error("language model order must be >= 1");
  if (!(backoff > 0.0 && backoff <= 1.0)) {
    throw Error("backoff factor must be in (0,1]");
  }
}

std::string NgramLm::key(std::span<const std::string> tokens) {
  std::string k;
  for (const auto& t : tokens) {
    if (!k.empty()) k += ' ';
    k += t;
  }
  return k;
}

void NgramLm::bump(const std::string& ngram_key, std::size_t n, std::uint64_t by,
                   std::span<const std::string> tokens) {
  auto& c = counts_[ngram_key];
  if (n == 1) {
    if (c == 0) ++unigram_types_;
    total_ += by;
  } else {
    context_counts_[key(tokens.first(n - 1))] += by;
  }
  c += by;
}

void NgramLm::add_sentence(const TokenSequence& sentence) {
  std::vector<std::string> padded;
  padded.reserve(sentence.size() + 2);
  padded.emplace_back(kBos);
  padded.insert(padded.end(), sentence.begin(), sentence.end());
  padded.emplace_back(kEos);
  const std::span<const std::string> all(padded);
  for (std::size_t end = 1; end < padded.size(); ++end) {
    for (std::size_t n = 1; n <= static_cast<std::size_t>(order_) && n <= end + 1; ++n) {
      const auto gram = all.subspan(end + 1 - n, n);
      if (n == 1 && gram[0] == kBos) continue;
      bump(key(gram), n, 1, gram);
    }
  }
}

void NgramLm::merge(const NgramLm& other) {
  if (other.order_ != order_) throw Error("cannot merge models of different order");
  for (const auto& [k, c] : other.counts_) {
    auto& mine = counts_[k];
    if (k.find(' ') == std::string::npos) {
      if (mine == 0) ++unigram_types_;
      total_ += c;
    }
    mine += c;
  }
  for (const auto& [k, c] : other.context_counts_) context_counts_[k] += c;
}

void NgramLm::set_count(std::span<const std::string> ngram, std::uint64_t count) {
  if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) {
    throw Error("n-gram length out of range");
  }
  const std::string k = key(ngram);
  if (counts_.count(k) != 0) throw Error("duplicate n-gram '" + k + "'");
  bump(k, ngram.size(), count, ngram);
}

std::uint64_t NgramLm::count(std::span<const std::string> ngram) const {
  auto it = counts_.find(key(ngram));
  return it == counts_.end() ? 0 : it->second;
}

double NgramLm::log_prob(std::span<const std::string> context,
                         std::string_view word) const {
  const std::size_t max_ctx = static_cast<std::size_t>(order_) - 1;
  if (context.size() > max_ctx) context = context.last(max_ctx);
  double penalty = 0.0;
  const double log_backoff = std::log(backoff_);
  std::string ctx_key;
  for (std::size_t start = 0; start < context.size(); ++start) {
    ctx_key = key(context.subspan(start));
    auto ctx = context_counts_.find(ctx_key);
    if (ctx != context_counts_.end()) {
      std::string gram = ctx_key;
      gram += ' ';
      gram += word;
      auto it = counts_.find(gram);
      if (it != counts_.end()) {
        return penalty + std::log(static_cast<double>(it->second)) -
               std::log(static_cast<double>(ctx->second));
      }
    }
    penalty += log_backoff;
  }
  auto it = counts_.find(std::string(word));
  const double c = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
  return penalty + std::log(c + 1.0) -
         std::log(static_cast<double>(total_) + static_cast<double>(unigram_types_) +
                  1.0);
}

double NgramLm::sentence_log_prob(const TokenSequence& sentence) const {
  std::vector<std::string> history{std::string(kBos)};
  double total = 0.0;
  for (const auto& w : sentence) {
    total += log_prob(history, w);
    history.push_back(w);
  }
  return total + log_prob(history, kEos);
}

}  // namespace pardaz
