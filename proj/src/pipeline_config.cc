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

#include "pardaz/pipeline_config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "pardaz/error.h"
#include "pardaz/rules.h"

namespace pardaz {
namespace {

constexpr std::string_view kNormPrefix = "norm.";
constexpr std::string_view kShipped = "<shipped>";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error("bad value for " + std::string(key) + ": '" + std::string(value) +
                "'");
  }
  return out;
}

const char* bool_string(bool b) { return b ? "1" : "0"; }

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::string rule_file_hash(const std::filesystem::path& rule_file) {
  if (rule_file.empty()) return hex64(fnv1a64(default_rules_text()));
  std::ifstream in(rule_file, std::ios::binary);
  if (!in) throw IoError("cannot open rule file " + rule_file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return hex64(fnv1a64(ss.str()));
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "rule_file") {
    rule_file = value == kShipped ? std::string() : std::string(value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "skip_probability") {
    const double p = parse_number<double>(key, value);
    if (!(p >= 0.0 && p <= 1.0)) throw Error("skip_probability must be in [0,1]");
    skip_probability = p;
  } else if (key == "lm_order") {
    lm_order = parse_number<int>(key, value);
    if (lm_order < 1) throw Error("lm_order must be >= 1");
  } else if (key == "lm_weight") {
    lm_weight = parse_number<double>(key, value);
    if (!(lm_weight >= 0.0)) throw Error("lm_weight must be >= 0");
  } else if (key == "decode_mode") {
    if (value != "greedy" && value != "beam") {
      throw Error("decode_mode must be greedy or beam");
    }
    decode_mode = std::string(value);
  } else if (key == "beam") {
    beam = parse_number<int>(key, value);
    if (beam < 1) throw Error("beam must be >= 1");
  } else if (key == "jobs") {
    jobs = parse_number<int>(key, value);
    if (jobs < 1) throw Error("jobs must be >= 1");
  } else if (key.substr(0, kNormPrefix.size()) == kNormPrefix) {
    std::string flag(key.substr(kNormPrefix.size()));
    flag += '=';
    flag += value;
    apply_normalization_flag(normalization, flag);
  } else if (key == "rule_hash") {
    // Informational; recomputed on every run.
  } else {
    throw Error("unknown config key '" + std::string(key) + "'");
  }
}

void PipelineConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error("config entry must be key=value: '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  return {
      {"rule_file", rule_file.empty() ? std::string(kShipped) : rule_file},
      {"rule_hash", rule_file_hash(rule_file)},
      {"seed", std::to_string(seed)},
      {"skip_probability", format_double(skip_probability)},
      {"lm_order", std::to_string(lm_order)},
      {"lm_weight", format_double(lm_weight)},
      {"decode_mode", decode_mode},
      {"beam", std::to_string(beam)},
      {"jobs", std::to_string(jobs)},
      {"norm.map_arabic_variants", bool_string(normalization.map_arabic_variants)},
      {"norm.strip_diacritics", bool_string(normalization.strip_diacritics)},
      {"norm.normalize_digits", bool_string(normalization.normalize_digits)},
      {"norm.collapse_whitespace", bool_string(normalization.collapse_whitespace)},
      {"norm.preserve_zwnj", bool_string(normalization.preserve_zwnj)},
  };
}

std::string PipelineConfig::to_string() const {
  std::string out;
  for (const auto& [k, v] : entries()) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

void apply_pipeline_config_text(PipelineConfig& cfg, std::string_view text,
                                std::string_view origin) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    try {
      cfg.set(line);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string(origin), line_no, e.what());
    }
  }
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  PipelineConfig cfg;
  apply_pipeline_config_text(cfg, ss.str(), path.string());
  return cfg;
}

}  // namespace pardaz
