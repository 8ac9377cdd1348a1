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

#ifndef PARDAZ_BASELINE_H_
#define PARDAZ_BASELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>

#include "pardaz/normalize.h"
#include "pardaz/rules.h"

namespace pardaz {

using FrequencyTable = std::unordered_map<std::string, std::uint64_t>;

enum class AmbiguityResolution { kMostFrequentStandardForm, kFirstListed };

struct BaselinePolicy {
  AmbiguityResolution ambiguity_resolution =
      AmbiguityResolution::kMostFrequentStandardForm;
  // Required by kMostFrequentStandardForm.
  std::optional<FrequencyTable> frequency_table;
};

// Throws Error when the policy needs a frequency table and has none.
void validate(const BaselinePolicy& policy);

// Token counts of a tokenized text, one sentence per line.
FrequencyTable count_frequencies(std::istream& in);
FrequencyTable count_frequencies(const std::filesystem::path& path);

// Single left-to-right pass of the inverted rules. With kFirstListed the
// first matching rule (in the inverted set's specificity order) fires. With
// kMostFrequentStandardForm every matching rule and the unchanged token
// compete; each is scored by the smallest corpus frequency among its output
// tokens, the highest non-zero score wins, ties go to rule order and then to
// the unchanged token. When no candidate is attested the first matching rule
// fires. Unmatched tokens are copied.
TokenSequence rule_standardize(const TokenSequence& colloquial,
                               const RuleSet& inverted,
                               const BaselinePolicy& policy);
TokenSequence rule_standardize(const TokenSequence& colloquial,
                               const RuleSet& inverted, const PosTagger& tagger,
                               const BaselinePolicy& policy);

}  // namespace pardaz

#endif  // PARDAZ_BASELINE_H_
