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

#include "pardaz/gencorpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "pardaz/error.h"
#include "pardaz/pipeline_config.h"
#include "pardaz/unicode.h"

namespace pardaz {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed;
  const std::uint64_t a = splitmix64(x);
  x = a ^ index;
  return splitmix64(x);
}

bool parse_size(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_span(std::string_view s, Span& out) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) return false;
  return parse_size(s.substr(0, dash), out.begin) &&
         parse_size(s.substr(dash + 1), out.end) && out.begin < out.end;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

TokenSequence split_tokens(std::string_view line) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct LineResult {
  bool ok = false;
  std::string warning;
  AlignedPair pair;
  SiteStats stats;
};

LineResult process_line(const std::string& line, std::uint64_t index,
                        const GeneratorConfig& cfg, const RuleSet& rules,
                        const PosTagger& tagger) {
  LineResult r;
  if (!unicode::is_valid(line)) {
    r.warning = "invalid UTF-8";
    return r;
  }
  TokenSequence std_tokens = normalize_and_tokenize(line, cfg.normalization);
  if (std_tokens.empty()) {
    r.warning = "empty after normalization";
    return r;
  }
  SentenceRng rng(cfg.rng_seed, index);
  r.pair = break_sentence(std_tokens, rules, tagger, cfg, rng, &r.stats);
  r.ok = true;
  return r;
}

}  // namespace

void validate(const GeneratorConfig& cfg) {
  if (!(cfg.skip_probability >= 0.0 && cfg.skip_probability <= 1.0)) {
    throw Error("skip probability must be in [0,1]");
  }
  if (cfg.jobs < 1) throw Error("jobs must be >= 1");
}

SentenceRng::SentenceRng(std::uint64_t seed, std::uint64_t sentence_index)
    : engine_(mix_seed(seed, sentence_index)) {}

std::uint64_t SentenceRng::next() { return engine_(); }

bool SentenceRng::bernoulli(double p) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return u < p;
}

AlignedPair break_sentence(const TokenSequence& standard, const RuleSet& rules,
                           const GeneratorConfig& cfg, SentenceRng& rng,
                           SiteStats* stats) {
  return break_sentence(standard, rules, LexiconTagger(rules), cfg, rng, stats);
}

AlignedPair break_sentence(const TokenSequence& standard, const RuleSet& rules,
                           const PosTagger& tagger, const GeneratorConfig& cfg,
                           SentenceRng& rng, SiteStats* stats) {
  AlignedPair pair;
  pair.standard = standard;
  std::size_t i = 0;
  while (i < standard.size()) {
    auto m = first_match(rules, standard, i, tagger);
    if (m) {
      if (stats) ++stats->sites;
      if (rng.bernoulli(cfg.skip_probability)) {
        if (stats) ++stats->skipped;
        m.reset();
      }
    }
    if (!m) {
      pair.colloquial.push_back(standard[i]);
      ++i;
      continue;
    }
    const std::size_t t0 = pair.colloquial.size();
    for (auto& tok : m->output.tokens) pair.colloquial.push_back(std::move(tok));
    pair.trace.push_back({m->rule->id,
                          {i, i + m->output.consumed},
                          {t0, pair.colloquial.size()}});
    i += m->output.consumed;
  }
  return pair;
}

std::string format_trace(const std::vector<RuleApplication>& trace) {
  std::string out;
  for (const auto& app : trace) {
    if (!out.empty()) out += ';';
    out += app.rule_id;
    out += ':';
    out += std::to_string(app.source.begin) + "-" + std::to_string(app.source.end);
    out += ':';
    out += std::to_string(app.target.begin) + "-" + std::to_string(app.target.end);
  }
  return out;
}

std::vector<RuleApplication> parse_trace(std::string_view line) {
  std::vector<RuleApplication> out;
  if (line.empty()) return out;
  std::size_t start = 0;
  while (start <= line.size()) {
    const auto semi = line.find(';', start);
    const std::string_view entry =
        line.substr(start, semi == std::string_view::npos ? line.npos : semi - start);
    const auto c2 = entry.rfind(':');
    const auto c1 = c2 == std::string_view::npos || c2 == 0
                        ? std::string_view::npos
                        : entry.rfind(':', c2 - 1);
    RuleApplication app;
    if (c1 == std::string_view::npos || c1 == 0 ||
        !parse_span(entry.substr(c1 + 1, c2 - c1 - 1), app.source) ||
        !parse_span(entry.substr(c2 + 1), app.target)) {
      throw Error("malformed trace entry '" + std::string(entry) + "'");
    }
    app.rule_id = std::string(entry.substr(0, c1));
    out.push_back(std::move(app));
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return out;
}

TokenSequence replay_trace(const TokenSequence& standard,
                           const std::vector<RuleApplication>& trace,
                           const RuleSet& rules) {
  const LexiconTagger tagger(rules);
  TokenSequence out;
  std::size_t i = 0;
  for (const auto& app : trace) {
    if (app.source.begin < i || app.source.end > standard.size()) {
      throw Error("trace entry '" + app.rule_id + "' is out of order or range");
    }
    while (i < app.source.begin) out.push_back(standard[i++]);
    if (app.target.begin != out.size()) {
      throw Error("trace entry '" + app.rule_id + "' has a misplaced target span");
    }
    const RewriteRule* rule = rules.find(app.rule_id);
    if (rule == nullptr) throw Error("trace names unknown rule '" + app.rule_id + "'");
    auto m = match_rule(*rule, standard, i, tagger);
    if (!m || m->consumed != app.source.size() ||
        m->tokens.size() != app.target.size()) {
      throw Error("rule '" + app.rule_id + "' does not reproduce its trace span at " +
                  std::to_string(i));
    }
    for (auto& tok : m->tokens) out.push_back(std::move(tok));
    i = app.source.end;
  }
  while (i < standard.size()) out.push_back(standard[i++]);
  return out;
}

bool trace_consistent(const AlignedPair& pair) {
  try {
    const auto segs =
        full_alignment(pair.trace, pair.standard.size(), pair.colloquial.size());
    for (const auto& seg : segs) {
      if (seg.rule_id.empty() &&
          pair.standard[seg.source.begin] != pair.colloquial[seg.target.begin]) {
        return false;
      }
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string CorpusSummary::to_meta() const {
  std::ostringstream out;
  out << "format=pardaz-corpus 1\n"
      << "source_tag=" << kColloquialTag << '\n'
      << "target_tag=" << kStandardTag << '\n'
      << "seed=" << seed << '\n'
      << "skip_probability=" << format_double(skip_probability) << '\n'
      << "rule_hash=" << rule_hash << '\n'
      << "input_lines=" << input_lines << '\n'
      << "sentences=" << sentences << '\n'
      << "converted_sentences=" << converted_sentences << '\n'
      << "applications=" << applications << '\n'
      << "sites=" << sites << '\n'
      << "skipped=" << skipped << '\n'
      << "malformed=" << malformed << '\n';
  return out.str();
}

CorpusFiles CorpusFiles::for_prefix(const std::filesystem::path& prefix) {
  auto with = [&](const char* ext) {
    std::filesystem::path p = prefix;
    p += ext;
    return p;
  };
  return {with(".fab"), with(".fa"), with(".trace"), with(".meta")};
}

CorpusSummary generate_corpus(std::istream& input, const CorpusFiles& out,
                              const GeneratorConfig& cfg, const RuleSet& rules,
                              std::string_view rule_hash, std::ostream* log) {
  validate(cfg);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + p.string());
    return f;
  };
  std::ofstream fab = open(out.colloquial);
  std::ofstream fa = open(out.standard);
  std::ofstream tr = open(out.trace);

  CorpusSummary sum;
  sum.seed = cfg.rng_seed;
  sum.skip_probability = cfg.skip_probability;
  sum.rule_hash = std::string(rule_hash);

  const LexiconTagger tagger(rules);
  const std::size_t jobs = static_cast<std::size_t>(cfg.jobs);
  const std::size_t chunk = 1024 * jobs;
  std::vector<std::string> lines;
  std::vector<LineResult> results;
  bool done = false;
  std::uint64_t next_index = 0;
  while (!done) {
    lines.clear();
    std::string line;
    while (lines.size() < chunk && std::getline(input, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
    if (lines.size() < chunk) done = true;
    if (lines.empty()) break;
    results.assign(lines.size(), LineResult{});
    const std::uint64_t base = next_index;
    auto work = [&](std::size_t worker) {
      for (std::size_t k = worker; k < lines.size(); k += jobs) {
        results[k] = process_line(lines[k], base + k, cfg, rules, tagger);
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    for (std::size_t k = 0; k < results.size(); ++k) {
      ++sum.input_lines;
      auto& r = results[k];
      if (!r.ok) {
        ++sum.malformed;
        if (log) {
          *log << "pardaz: warning: line " << (base + k + 1) << ": " << r.warning
               << ", skipped\n";
        }
        continue;
      }
      if (cfg.max_sentences && sum.sentences >= *cfg.max_sentences) {
        done = true;
        break;
      }
      ++sum.sentences;
      sum.sites += r.stats.sites;
      sum.skipped += r.stats.skipped;
      sum.applications += r.pair.trace.size();
      if (!r.pair.trace.empty()) ++sum.converted_sentences;
      fab << join_tokens(r.pair.colloquial) << '\n';
      fa << join_tokens(r.pair.standard) << '\n';
      tr << format_trace(r.pair.trace) << '\n';
    }
    next_index += lines.size();
  }
  if (input.bad()) throw IoError("read error on corpus input");
  fab.flush();
  fa.flush();
  tr.flush();
  if (!fab || !fa || !tr) throw IoError("write error on corpus output");
  std::ofstream meta = open(out.meta);
  meta << sum.to_meta();
  if (!meta) throw IoError("cannot write " + out.meta.string());
  return sum;
}

CorpusSummary generate_corpus(const std::filesystem::path& input,
                              const std::filesystem::path& prefix,
                              const GeneratorConfig& cfg, std::ostream* log) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw IoError("cannot open input " + input.string());
  const RuleSet loaded =
      cfg.rule_file.empty() ? RuleSet{} : parse_rule_file(cfg.rule_file);
  const RuleSet& rules = cfg.rule_file.empty() ? default_rule_set() : loaded;
  return generate_corpus(in, CorpusFiles::for_prefix(prefix), cfg, rules,
                         rule_file_hash(cfg.rule_file), log);
}

std::vector<AlignedPair> read_corpus(const std::filesystem::path& prefix) {
  const auto files = CorpusFiles::for_prefix(prefix);
  const auto fab = read_lines(files.colloquial);
  const auto fa = read_lines(files.standard);
  const auto tr = read_lines(files.trace);
  if (fab.size() != fa.size() || fa.size() != tr.size()) {
    throw Error("corpus files under " + prefix.string() +
                " have different line counts");
  }
  std::vector<AlignedPair> out;
  out.reserve(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    AlignedPair p;
    p.colloquial = split_tokens(fab[i]);
    p.standard = split_tokens(fa[i]);
    try {
      p.trace = parse_trace(tr[i]);
    } catch (const Error& e) {
      throw ParseError(files.trace.string(), i + 1, e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace pardaz
