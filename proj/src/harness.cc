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

#include "pardaz/harness.h"

#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "pardaz/error.h"

namespace pardaz {
namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(line.substr(start, pos == std::string::npos ? line.npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void check_record(const EvalRecord& r, const std::string& origin, std::size_t line) {
  if (r.source.empty()) throw ParseError(origin, line, "empty source sentence");
  if (r.word_ref.empty()) throw ParseError(origin, line, "empty word reference");
}

std::vector<EvalRecord> load_delimited(const std::filesystem::path& path, Split split,
                                       const ColumnMap& cols,
                                       const NormalizationConfig& norm) {
  const auto lines = read_lines(path);
  const std::string origin = path.string();
  std::vector<EvalRecord> out;
  int needed = std::max(cols.source, cols.word_ref);
  needed = std::max(needed, std::max(cols.style_ref, cols.genre));
  for (std::size_t i = cols.header ? 1 : 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_fields(lines[i], cols.delimiter);
    if (static_cast<int>(f.size()) <= needed) {
      throw ParseError(origin, i + 1,
                       "expected at least " + std::to_string(needed + 1) + " columns");
    }
    EvalRecord r;
    r.split = split;
    r.source = normalize_and_tokenize(f[cols.source], norm);
    r.word_ref = normalize_and_tokenize(f[cols.word_ref], norm);
    r.style_ref = cols.style_ref >= 0 ? normalize_and_tokenize(f[cols.style_ref], norm)
                                      : r.word_ref;
    if (cols.genre >= 0 && !f[cols.genre].empty()) r.genre = f[cols.genre];
    check_record(r, origin, i + 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EvalRecord> load_parallel(const std::filesystem::path& dir, Split split,
                                      const NormalizationConfig& norm) {
  const std::string base(to_string(split));
  const auto src_path = dir / (base + ".src");
  const auto src = read_lines(src_path);
  const auto word = read_lines(dir / (base + ".word"));
  const auto style_path = dir / (base + ".style");
  const auto style =
      std::filesystem::exists(style_path) ? read_lines(style_path) : word;
  const auto genre_path = dir / (base + ".genre");
  const auto genre = std::filesystem::exists(genre_path)
                         ? read_lines(genre_path)
                         : std::vector<std::string>(src.size());
  if (word.size() != src.size() || style.size() != src.size() ||
      genre.size() != src.size()) {
    throw Error("parallel dataset files under " + dir.string() +
                " have different line counts");
  }
  std::vector<EvalRecord> out;
  for (std::size_t i = 0; i < src.size(); ++i) {
    EvalRecord r;
    r.split = split;
    r.source = normalize_and_tokenize(src[i], norm);
    r.word_ref = normalize_and_tokenize(word[i], norm);
    r.style_ref = normalize_and_tokenize(style[i], norm);
    if (!genre[i].empty()) r.genre = genre[i];
    check_record(r, src_path.string(), i + 1);
    out.push_back(std::move(r));
  }
  return out;
}

ReferenceScores score_both(const std::vector<TokenSequence>& hyps,
                           const std::vector<const EvalRecord*>& recs) {
  BleuStats word, style;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    word.add(hyps[i], recs[i]->word_ref);
    style.add(hyps[i], recs[i]->style_ref);
  }
  return {compute_bleu(word), compute_bleu(style)};
}

std::string pad(const std::string& s, std::size_t width) {
  std::string out = s;
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

std::string_view to_string(Split split) {
  return split == Split::kDev ? "dev" : "test";
}

std::string_view to_string(ReferenceType ref) {
  return ref == ReferenceType::kWord ? "word" : "style";
}

Split split_from_string(std::string_view s) {
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  throw Error("unknown split '" + std::string(s) + "' (expected dev or test)");
}

ReferenceType reference_from_string(std::string_view s) {
  if (s == "word") return ReferenceType::kWord;
  if (s == "style") return ReferenceType::kStyle;
  throw Error("unknown reference type '" + std::string(s) + "' (expected word or style)");
}

std::size_t published_split_size(Split split) {
  return split == Split::kDev ? 917 : 1012;
}

ColumnMap ColumnMap::parse(std::string_view spec) {
  ColumnMap m;
  std::size_t start = 0;
  while (start < spec.size()) {
    auto comma = spec.find(',', start);
    if (comma == std::string_view::npos) comma = spec.size();
    const std::string_view item = spec.substr(start, comma - start);
    start = comma + 1;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error("column map entry must be key=value: '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw Error("bad column map value '" + std::string(item) + "'");
    }
    if (key == "source") {
      m.source = v;
    } else if (key == "word") {
      m.word_ref = v;
    } else if (key == "style") {
      m.style_ref = v;
    } else if (key == "genre") {
      m.genre = v;
    } else if (key == "header") {
      m.header = v != 0;
    } else {
      throw Error("unknown column map key '" + std::string(key) + "'");
    }
  }
  if (m.source < 0 || m.word_ref < 0) {
    throw Error("column map needs non-negative source and word columns");
  }
  return m;
}

std::vector<EvalRecord> load_dataset(const std::filesystem::path& path, Split split,
                                     const ColumnMap& columns,
                                     const NormalizationConfig& norm) {
  if (!std::filesystem::exists(path)) {
    throw IoError("dataset path does not exist: " + path.string());
  }
  if (!std::filesystem::is_directory(path)) {
    return load_delimited(path, split, columns, norm);
  }
  const std::string base(to_string(split));
  const auto tsv = path / (base + ".tsv");
  if (std::filesystem::exists(tsv)) return load_delimited(tsv, split, columns, norm);
  return load_parallel(path, split, norm);
}

std::optional<std::string> check_published_counts(
    const std::vector<EvalRecord>& records, Split split) {
  const std::size_t want = published_split_size(split);
  if (records.size() == want) return std::nullopt;
  return std::string(to_string(split)) + " split has " +
         std::to_string(records.size()) + " records; the published split has " +
         std::to_string(want);
}

const BleuScore& EvalReport::primary() const {
  return reference == ReferenceType::kWord ? system_scores.word : system_scores.style;
}

const BleuScore& EvalReport::primary_identity() const {
  return reference == ReferenceType::kWord ? identity_scores.word
                                           : identity_scores.style;
}

EvalReport evaluate(std::string_view system_name, const StandardizeFn& system,
                    const std::vector<EvalRecord>& records, ReferenceType reference,
                    int jobs) {
  if (records.empty()) throw Error("evaluate: no records");
  if (jobs < 1) throw Error("jobs must be >= 1");
  EvalReport rep;
  rep.system = std::string(system_name);
  rep.split = records.front().split;
  rep.reference = reference;
  rep.records = records.size();
  rep.hypotheses.resize(records.size());

  const std::size_t n = static_cast<std::size_t>(jobs);
  std::vector<std::exception_ptr> errors(records.size());
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < records.size(); i += n) {
      try {
        rep.hypotheses[i] = system(records[i].source);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw Error("system '" + rep.system + "' failed on record " + std::to_string(i) +
                ": " + what);
  }

  std::vector<const EvalRecord*> all;
  std::vector<TokenSequence> sources;
  for (const auto& r : records) {
    all.push_back(&r);
    sources.push_back(r.source);
  }
  rep.system_scores = score_both(rep.hypotheses, all);
  rep.identity_scores = score_both(sources, all);

  std::map<std::string, std::pair<std::vector<TokenSequence>,
                                  std::vector<const EvalRecord*>>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].genre) continue;
    auto& g = groups[*records[i].genre];
    g.first.push_back(rep.hypotheses[i]);
    g.second.push_back(&records[i]);
  }
  for (const auto& [genre, g] : groups) {
    rep.by_genre[genre] = score_both(g.first, g.second);
  }
  return rep;
}

std::string format_report(const EvalReport& rep) {
  struct Row {
    std::string system, ref;
    const BleuScore* s;
  };
  std::vector<Row> rows = {
      {rep.system, "word", &rep.system_scores.word},
      {rep.system, "style", &rep.system_scores.style},
      {"identity", "word", &rep.identity_scores.word},
      {"identity", "style", &rep.identity_scores.style},
  };
  for (const auto& [genre, sc] : rep.by_genre) {
    rows.push_back({rep.system + "/" + genre, "word", &sc.word});
    rows.push_back({rep.system + "/" + genre, "style", &sc.style});
  }
  std::size_t w = 6;
  for (const auto& r : rows) w = std::max(w, r.system.size());
  std::ostringstream out;
  out << pad("system", w) << "  ref    BLEU     BP  hyp_len  ref_len\n";
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %-5s %5s  %5.3f  %7llu  %7llu\n", r.ref.c_str(),
                  format_bleu(r.s->score).c_str(), r.s->brevity_penalty,
                  static_cast<unsigned long long>(r.s->hyp_length),
                  static_cast<unsigned long long>(r.s->ref_length));
    out << pad(r.system, w) << buf;
  }
  out << '\n';
  out << "system=" << rep.system << '\n';
  out << "split=" << to_string(rep.split) << '\n';
  out << "reference=" << to_string(rep.reference) << '\n';
  out << "records=" << rep.records << '\n';
  out << "bleu=" << format_bleu(rep.primary().score) << '\n';
  out << "bleu.word=" << format_bleu(rep.system_scores.word.score) << '\n';
  out << "bleu.style=" << format_bleu(rep.system_scores.style.score) << '\n';
  out << "identity.bleu=" << format_bleu(rep.primary_identity().score) << '\n';
  out << "identity.bleu.word=" << format_bleu(rep.identity_scores.word.score) << '\n';
  out << "identity.bleu.style=" << format_bleu(rep.identity_scores.style.score) << '\n';
  for (const auto& [genre, sc] : rep.by_genre) {
    out << "genre." << genre << ".bleu.word=" << format_bleu(sc.word.score) << '\n';
    out << "genre." << genre << ".bleu.style=" << format_bleu(sc.style.score) << '\n';
  }
  return out.str();
}

}  // namespace pardaz
