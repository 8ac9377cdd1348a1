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

#include "pardaz/bleu.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "pardaz/error.h"

namespace pardaz {
namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::uint64_t> ngram_counts(const TokenSequence& s, std::size_t n) {
  std::map<Ngram, std::uint64_t> out;
  if (s.size() < n) return out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    ++out[Ngram(s.begin() + static_cast<std::ptrdiff_t>(i),
                s.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

double floored_log(double x) { return x == 0.0 ? -9999999999.0 : std::log(x); }

}  // namespace

void BleuStats::add(const TokenSequence& hypothesis, const TokenSequence& reference) {
  hyp_length += hypothesis.size();
  ref_length += reference.size();
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    const auto hyp = ngram_counts(hypothesis, n);
    const auto ref = ngram_counts(reference, n);
    for (const auto& [gram, c] : hyp) {
      auto it = ref.find(gram);
      if (it != ref.end()) matches[n - 1] += std::min(c, it->second);
    }
    if (hypothesis.size() >= n) totals[n - 1] += hypothesis.size() - n + 1;
  }
}

void BleuStats::merge(const BleuStats& other) {
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_length += other.hyp_length;
  ref_length += other.ref_length;
}

BleuScore compute_bleu(const BleuStats& stats, Smoothing smoothing) {
  BleuScore s;
  s.stats = stats;
  s.hyp_length = stats.hyp_length;
  s.ref_length = stats.ref_length;
  if (stats.hyp_length < stats.ref_length) {
    s.brevity_penalty =
        stats.hyp_length > 0
            ? std::exp(1.0 - static_cast<double>(stats.ref_length) /
                                 static_cast<double>(stats.hyp_length))
            : 0.0;
  }
  if (std::all_of(stats.matches.begin(), stats.matches.end(),
                  [](std::uint64_t m) { return m == 0; })) {
    return s;
  }
  // Percentages, as the reference implementation computes them.
  std::array<double, kBleuOrder> pct{};
  double smooth = 1.0;
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    if (stats.totals[n] == 0) break;
    const double total = static_cast<double>(stats.totals[n]);
    if (stats.matches[n] == 0) {
      if (smoothing == Smoothing::kExp) {
        smooth *= 2.0;
        pct[n] = 100.0 / (smooth * total);
      }
    } else {
      pct[n] = 100.0 * static_cast<double>(stats.matches[n]) / total;
    }
  }
  double sum = 0.0;
  for (double p : pct) sum += floored_log(p);
  s.score = s.brevity_penalty * std::exp(sum / static_cast<double>(kBleuOrder));
  for (std::size_t n = 0; n < kBleuOrder; ++n) s.precisions[n] = pct[n] / 100.0;
  return s;
}

BleuScore corpus_bleu(const std::vector<TokenSequence>& hypotheses,
                      const std::vector<TokenSequence>& references,
                      Smoothing smoothing) {
  if (hypotheses.size() != references.size()) {
    throw Error("corpus_bleu: " + std::to_string(hypotheses.size()) +
                " hypotheses but " + std::to_string(references.size()) +
                " references");
  }
  if (hypotheses.empty()) throw Error("corpus_bleu: empty corpus");
  BleuStats stats;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    stats.add(hypotheses[i], references[i]);
  }
  return compute_bleu(stats, smoothing);
}

std::string format_bleu(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", score);
  return buf;
}

std::string BleuScore::to_string() const {
  char buf[256];
  const double ratio =
      ref_length > 0 ? static_cast<double>(hyp_length) / static_cast<double>(ref_length)
                     : 0.0;
  std::snprintf(buf, sizeof(buf),
                "BLEU = %.1f %.1f/%.1f/%.1f/%.1f (BP = %.3f ratio = %.3f hyp_len = "
                "%llu ref_len = %llu)",
                score, 100.0 * precisions[0], 100.0 * precisions[1],
                100.0 * precisions[2], 100.0 * precisions[3], brevity_penalty, ratio,
                static_cast<unsigned long long>(hyp_length),
                static_cast<unsigned long long>(ref_length));
  return buf;
}

}  // namespace pardaz
