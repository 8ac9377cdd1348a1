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

#ifndef PARDAZ_HARNESS_H_
#define PARDAZ_HARNESS_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pardaz/bleu.h"
#include "pardaz/normalize.h"

namespace pardaz {

enum class Split { kDev, kTest };
enum class ReferenceType { kWord, kStyle };

std::string_view to_string(Split split);
std::string_view to_string(ReferenceType ref);
Split split_from_string(std::string_view s);                 // throws Error
ReferenceType reference_from_string(std::string_view s);     // throws Error

// Published split sizes: dev 917, test 1012.
std::size_t published_split_size(Split split);

struct EvalRecord {
  TokenSequence source;     // colloquial
  TokenSequence word_ref;   // word-form standardization
  TokenSequence style_ref;  // stylistic standardization
  std::optional<std::string> genre;
  Split split = Split::kDev;
};

// 0-based column indices of a delimited dataset file. A negative style
// column reuses the word reference; a negative genre column means none.
struct ColumnMap {
  int source = 0;
  int word_ref = 1;
  int style_ref = 2;
  int genre = 3;
  bool header = false;
  char delimiter = '\t';

  // Parses "source=0,word=1,style=2,genre=3[,header=1]".
  static ColumnMap parse(std::string_view spec);
};

// Loads one split. `path` is either a delimited file or a directory holding
// `<split>.tsv`, or the parallel layout `<split>.src`, `<split>.word` and
// optionally `<split>.style` with one sentence per line. All text fields are
// normalized and tokenized with `norm`. Throws IoError for missing files and
// ParseError for records with an empty source or word reference.
std::vector<EvalRecord> load_dataset(const std::filesystem::path& path, Split split,
                                     const ColumnMap& columns = {},
                                     const NormalizationConfig& norm = {});

// A warning when the record count differs from the published split size.
std::optional<std::string> check_published_counts(
    const std::vector<EvalRecord>& records, Split split);

using StandardizeFn = std::function<TokenSequence(const TokenSequence&)>;

struct ReferenceScores {
  BleuScore word;
  BleuScore style;
};

struct EvalReport {
  std::string system;
  Split split = Split::kDev;
  ReferenceType reference = ReferenceType::kWord;
  std::size_t records = 0;
  ReferenceScores system_scores;
  // The unchanged source ("original data") scored on the same records.
  ReferenceScores identity_scores;
  std::map<std::string, ReferenceScores> by_genre;
  std::vector<TokenSequence> hypotheses;

  const BleuScore& primary() const;
  const BleuScore& primary_identity() const;
};

// Decodes every source once and scores the hypotheses against both
// reference columns. Throws Error naming the record index when the system
// fails on a record.
EvalReport evaluate(std::string_view system_name, const StandardizeFn& system,
                    const std::vector<EvalRecord>& records, ReferenceType reference,
                    int jobs = 1);

// Aligned table followed by `key=value` lines. Scores use one decimal.
std::string format_report(const EvalReport& report);

}  // namespace pardaz

#endif  // PARDAZ_HARNESS_H_
