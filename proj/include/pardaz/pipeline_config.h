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

#ifndef PARDAZ_PIPELINE_CONFIG_H_
#define PARDAZ_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pardaz/normalize.h"

namespace pardaz {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

// Hash of a rule file's bytes; the empty path means the shipped rules.
std::string rule_file_hash(const std::filesystem::path& rule_file);

// Resolved settings of one pipeline run. Serialized as `key=value` lines.
struct PipelineConfig {
  std::string rule_file;  // empty: shipped rules
  std::uint64_t seed = 0;
  double skip_probability = 0.1;
  int lm_order = 3;
  double lm_weight = 1.0;
  std::string decode_mode = "greedy";
  int beam = 4;
  int jobs = 1;
  NormalizationConfig normalization;

  // Sets one key. Throws Error on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
  // Parses a `key=value` pair.
  void set(std::string_view assignment);

  // All keys in a fixed order, plus rule_hash.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_string() const;
};

// Reads `key=value` lines; blank lines and `#` comments are ignored.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void apply_pipeline_config_text(PipelineConfig& cfg, std::string_view text,
                                std::string_view origin);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace pardaz

#endif  // PARDAZ_PIPELINE_CONFIG_H_
