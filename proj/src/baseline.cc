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

#include <fstream>
#include <istream>
#include <limits>

#include "pardaz/error.h"

namespace pardaz {
namespace {

std::uint64_t score(const TokenSequence& tokens, const FrequencyTable& freq) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (const auto& t : tokens) {
    auto it = freq.find(t);
    const std::uint64_t c = it == freq.end() ? 0 : it->second;
    if (c < best) best = c;
  }
  return tokens.empty() ? 0 : best;
}

}  // namespace

void validate(const BaselinePolicy& policy) {
  if (policy.ambiguity_resolution == AmbiguityResolution::kMostFrequentStandardForm &&
      !policy.frequency_table) {
    throw Error("most-frequent ambiguity resolution needs a frequency table");
  }
}

FrequencyTable count_frequencies(std::istream& in) {
  FrequencyTable freq;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\r') ++j;
      if (j > i) ++freq[line.substr(i, j - i)];
      i = j;
    }
  }
  return freq;
}

FrequencyTable count_frequencies(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return count_frequencies(in);
}

TokenSequence rule_standardize(const TokenSequence& colloquial,
                               const RuleSet& inverted,
                               const BaselinePolicy& policy) {
  return rule_standardize(colloquial, inverted, LexiconTagger(inverted), policy);
}

TokenSequence rule_standardize(const TokenSequence& colloquial,
                               const RuleSet& inverted, const PosTagger& tagger,
                               const BaselinePolicy& policy) {
  validate(policy);
  const bool first_listed =
      policy.ambiguity_resolution == AmbiguityResolution::kFirstListed;
  TokenSequence out;
  std::size_t i = 0;
  while (i < colloquial.size()) {
    std::optional<RuleOutput> chosen;
    if (first_listed) {
      if (auto m = first_match(inverted, colloquial, i, tagger)) {
        chosen = std::move(m->output);
      }
    } else {
      const FrequencyTable& freq = *policy.frequency_table;
      std::optional<RuleOutput> first;
      std::uint64_t best = 0;
      for (const auto& rule : inverted.rules) {
        auto m = match_rule(rule, colloquial, i, tagger);
        if (!m) continue;
        const std::uint64_t s = score(m->tokens, freq);
        if (!first) first = *m;
        if (s > best) {
          best = s;
          chosen = std::move(m);
        }
      }
      if (first) {
        auto it = freq.find(colloquial[i]);
        const std::uint64_t keep = it == freq.end() ? 0 : it->second;
        if (keep > best) {
          chosen.reset();
        } else if (best == 0) {
          chosen = std::move(first);
        }
      }
    }
    if (!chosen) {
      out.push_back(colloquial[i]);
      ++i;
      continue;
    }
    for (auto& t : chosen->tokens) out.push_back(std::move(t));
    i += chosen->consumed;
  }
  return out;
}

}  // namespace pardaz
