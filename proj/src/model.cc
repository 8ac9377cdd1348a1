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

#include "pardaz/model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "pardaz/error.h"

namespace pardaz {
namespace {

constexpr std::string_view kMagic = "pardaz-model";

std::string join(std::span<const std::string> tokens) {
  std::string k;
  for (const auto& t : tokens) {
    if (!k.empty()) k += ' ';
    k += t;
  }
  return k;
}

TokenSequence split(std::string_view s, char sep = ' ') {
  TokenSequence out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto piece = s.substr(start, pos == std::string_view::npos ? s.npos : pos - start);
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string hex_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::hex);
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Decoding

struct Hyp {
  std::int64_t score = 0;  // ticks
  TokenSequence out;
};

// Better = higher score, then lexicographically smaller output.
bool better(const Hyp& a, const Hyp& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.out < b.out;
}

std::string lm_state(const TokenSequence& out, int order) {
  const std::size_t keep = static_cast<std::size_t>(order) - 1;
  std::string k;
  if (out.size() < keep) k = std::string(kBos);
  const std::size_t from = out.size() > keep ? out.size() - keep : 0;
  for (std::size_t i = from; i < out.size(); ++i) {
    k += ' ';
    k += out[i];
  }
  return k;
}

std::int64_t lm_extend(const NgramLm& lm, double weight, const TokenSequence& prefix,
                       const TokenSequence& added, std::int64_t score) {
  const std::size_t keep = static_cast<std::size_t>(lm.order()) - 1;
  std::vector<std::string> ctx;
  if (prefix.size() < keep) ctx.emplace_back(kBos);
  const std::size_t from = prefix.size() > keep ? prefix.size() - keep : 0;
  ctx.insert(ctx.end(), prefix.begin() + static_cast<std::ptrdiff_t>(from), prefix.end());
  for (const auto& w : added) {
    score += score_ticks(weight * lm.log_prob(ctx, w));
    ctx.push_back(w);
  }
  return score;
}

class Stack {
 public:
  void add(Hyp h, const std::string& state) {
    auto [it, inserted] = index_.try_emplace(state, hyps_.size());
    if (inserted) {
      hyps_.push_back(std::move(h));
    } else if (better(h, hyps_[it->second])) {
      hyps_[it->second] = std::move(h);
    }
  }
  void prune(std::size_t beam) {
    std::sort(hyps_.begin(), hyps_.end(), better);
    if (hyps_.size() > beam) hyps_.resize(beam);
    index_.clear();
  }
  const std::vector<Hyp>& hyps() const { return hyps_; }

 private:
  std::vector<Hyp> hyps_;
  std::unordered_map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Model file reading

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string line(const char* what) {
    std::string s;
    if (!std::getline(in_, s)) {
      throw FormatError(std::string("model file truncated: expected ") + what);
    }
    ++line_no_;
    return s;
  }

  std::vector<std::string> fields(const char* what) {
    const std::string s = line(what);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const auto tab = s.find('\t', start);
      out.push_back(s.substr(start, tab == std::string::npos ? s.npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError("model file line " + std::to_string(line_no_) + ": " + msg);
  }

  std::size_t section(const char* name) {
    const auto f = fields(name);
    std::size_t n = 0;
    if (f.size() != 2 || f[0] != name || !parse(f[1], n)) {
      fail(std::string("expected '") + name + "\t<count>'");
    }
    return n;
  }

  template <typename T>
  bool parse(std::string_view s, T& out) const {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  }

  double parse_hex(std::string_view s) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v,
                                     std::chars_format::hex);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail("bad number '" + std::string(s) + "'");
    }
    return v;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// TransductionModel

TransductionModel::TransductionModel(ModelConfig config, NgramLm lm)
    : config_(config), lm_(std::move(lm)) {}

const std::vector<PhraseCandidate>* TransductionModel::lookup(
    std::span<const std::string> source) const {
  auto it = table_.find(join(source));
  return it == table_.end() ? nullptr : &it->second;
}

void TransductionModel::set_candidates(std::span<const std::string> source,
                                       std::vector<PhraseCandidate> candidates) {
  if (source.empty() || source.size() > kMaxSourcePhrase) {
    throw Error("source phrase length out of range");
  }
  for (const auto& c : candidates) {
    if (c.target.empty() || c.target.size() > kMaxTargetPhrase) {
      throw Error("target phrase length out of range");
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const PhraseCandidate& a, const PhraseCandidate& b) {
              return a.target < b.target;
            });
  table_[join(source)] = std::move(candidates);
}

// ---------------------------------------------------------------------------
// Training

ModelTrainer::ModelTrainer(ModelConfig config, const RuleSet* rules)
    : config_(config), rules_(rules), lm_(config.lm_order, config.lm_backoff) {}

bool ModelTrainer::add(const AlignedPair& pair) {
  bool ok = !pair.standard.empty() && trace_consistent(pair);
  if (ok && rules_ != nullptr) {
    try {
      ok = replay_trace(pair.standard, pair.trace, *rules_) == pair.colloquial;
    } catch (const Error&) {
      ok = false;
    }
  }
  if (!ok) {
    ++rejected_;
    return false;
  }
  ++accepted_;
  for (const auto& seg :
       full_alignment(pair.trace, pair.standard.size(), pair.colloquial.size())) {
    const std::span<const std::string> src(pair.colloquial.data() + seg.target.begin,
                                           seg.target.size());
    const std::span<const std::string> tgt(pair.standard.data() + seg.source.begin,
                                           seg.source.size());
    if (seg.rule_id.empty()) {
      ++pairs_[src[0]][tgt[0]].identity;
      continue;
    }
    if (src.size() > kMaxSourcePhrase || tgt.size() > kMaxTargetPhrase) {
      ++oversized_;
      continue;
    }
    ++pairs_[join(src)][join(tgt)].rule;
  }
  lm_.add_sentence(pair.standard);
  return true;
}

void ModelTrainer::merge(const ModelTrainer& other) {
  for (const auto& [src, targets] : other.pairs_) {
    auto& mine = pairs_[src];
    for (const auto& [tgt, c] : targets) {
      mine[tgt].rule += c.rule;
      mine[tgt].identity += c.identity;
    }
  }
  lm_.merge(other.lm_);
  accepted_ += other.accepted_;
  rejected_ += other.rejected_;
  oversized_ += other.oversized_;
}

TransductionModel ModelTrainer::finish() const {
  TransductionModel model(config_, lm_);
  for (const auto& [src, targets] : pairs_) {
    double total = 0.0;
    for (const auto& [tgt, c] : targets) {
      total += static_cast<double>(c.rule) +
               config_.identity_weight * static_cast<double>(c.identity);
    }
    const double denom =
        total + config_.alpha * static_cast<double>(targets.size());
    std::vector<PhraseCandidate> cands;
    for (const auto& [tgt, c] : targets) {
      const double w = static_cast<double>(c.rule) +
                       config_.identity_weight * static_cast<double>(c.identity);
      const double num = w + config_.alpha;
      if (num <= 0.0) continue;
      cands.push_back({split(tgt), std::log(num) - std::log(denom)});
    }
    if (cands.empty()) continue;
    model.set_candidates(split(src), std::move(cands));
  }
  return model;
}

TransductionModel train(const std::vector<AlignedPair>& corpus,
                        const ModelConfig& config, const RuleSet* rules, int jobs,
                        TrainingSummary* summary) {
  if (jobs < 1) throw Error("jobs must be >= 1");
  const std::size_t n = static_cast<std::size_t>(jobs);
  std::vector<ModelTrainer> shards(n, ModelTrainer(config, rules));
  auto work = [&](std::size_t w) {
    const std::size_t begin = corpus.size() * w / n;
    const std::size_t end = corpus.size() * (w + 1) / n;
    for (std::size_t i = begin; i < end; ++i) shards[w].add(corpus[i]);
  };
  if (n == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (std::size_t w = 1; w < n; ++w) shards[0].merge(shards[w]);
  TransductionModel model = shards[0].finish();
  if (summary != nullptr) {
    summary->pairs = shards[0].accepted();
    summary->rejected = shards[0].rejected();
    summary->oversized_spans = shards[0].oversized_spans();
    summary->phrases = model.phrase_table().size();
  }
  return model;
}

// ---------------------------------------------------------------------------
// Decoding

std::int64_t score_ticks(double log_term) {
  if (!std::isfinite(log_term) || std::abs(log_term) > 0x1p30) {
    throw Error("score term out of range");
  }
  return std::llround(log_term / kScoreUnit);
}

int DecodeConfig::effective_beam() const {
  if (mode == Mode::kGreedy) return 1;
  if (beam_size < 1) throw Error("beam size must be >= 1");
  return beam_size;
}

DecodeResult decode(const TokenSequence& colloquial, const TransductionModel& model,
                    const DecodeConfig& cfg) {
  const std::size_t beam = static_cast<std::size_t>(cfg.effective_beam());
  const double weight = cfg.lm_weight >= 0.0 ? cfg.lm_weight : model.config().lm_weight;
  const NgramLm& lm = model.lm();
  const std::size_t n = colloquial.size();

  std::vector<Stack> stacks(n + 1);
  stacks[0].add(Hyp{}, lm_state({}, lm.order()));
  std::vector<PhraseCandidate> copy(1);
  for (std::size_t k = 0; k < n; ++k) {
    stacks[k].prune(beam);
    for (const Hyp& h : stacks[k].hyps()) {
      for (std::size_t len = 1; len <= kMaxSourcePhrase && k + len <= n; ++len) {
        const std::span<const std::string> src(colloquial.data() + k, len);
        const std::vector<PhraseCandidate>* cands = model.lookup(src);
        if (cands == nullptr) {
          if (len != 1) continue;
          copy[0].target = {colloquial[k]};
          copy[0].log_prob = model.config().unknown_log_penalty;
          cands = &copy;
        }
        for (const auto& c : *cands) {
          Hyp next;
          next.score = lm_extend(lm, weight, h.out, c.target,
                                 h.score + score_ticks(c.log_prob));
          next.out = h.out;
          next.out.insert(next.out.end(), c.target.begin(), c.target.end());
          const std::string state = lm_state(next.out, lm.order());
          stacks[k + len].add(std::move(next), state);
        }
      }
    }
  }
  stacks[n].prune(beam);
  const std::vector<std::string> eos{std::string(kEos)};
  Hyp best;
  bool have = false;
  for (const Hyp& h : stacks[n].hyps()) {
    Hyp done{lm_extend(lm, weight, h.out, eos, h.score), h.out};
    if (!have || better(done, best)) {
      best = std::move(done);
      have = true;
    }
  }
  return {std::move(best.out), static_cast<double>(best.score) * kScoreUnit};
}

TokenSequence standardize(const TokenSequence& colloquial,
                          const TransductionModel& model, const DecodeConfig& cfg) {
  return decode(colloquial, model, cfg).output;
}

// ---------------------------------------------------------------------------
// Serialization

void save_model(const TransductionModel& model, std::ostream& out) {
  const ModelConfig& c = model.config();
  std::set<std::string> vocab;
  for (const auto& [src, cands] : model.phrase_table()) {
    for (auto& t : split(src)) vocab.insert(std::move(t));
    for (const auto& cand : cands) vocab.insert(cand.target.begin(), cand.target.end());
  }
  std::vector<std::pair<std::string, std::uint64_t>> grams(model.lm().ngrams().begin(),
                                                           model.lm().ngrams().end());
  std::sort(grams.begin(), grams.end());
  for (const auto& [k, cnt] : grams) {
    for (auto& t : split(k)) vocab.insert(std::move(t));
  }
  std::unordered_map<std::string, std::size_t> id;
  for (const auto& t : vocab) id.emplace(t, id.size());
  auto ids = [&](std::string_view joined) {
    std::string s;
    for (const auto& t : split(joined)) {
      if (!s.empty()) s += ' ';
      s += std::to_string(id.at(t));
    }
    return s;
  };

  out << kMagic << '\t' << kModelFormatVersion << '\n';
  out << "config\tlm_order\t" << c.lm_order << '\n';
  out << "config\tlm_backoff\t" << hex_double(c.lm_backoff) << '\n';
  out << "config\tlm_weight\t" << hex_double(c.lm_weight) << '\n';
  out << "config\tidentity_weight\t" << hex_double(c.identity_weight) << '\n';
  out << "config\talpha\t" << hex_double(c.alpha) << '\n';
  out << "config\tunknown_log_penalty\t" << hex_double(c.unknown_log_penalty) << '\n';
  out << "vocab\t" << vocab.size() << '\n';
  for (const auto& t : vocab) out << t << '\n';
  std::size_t n_phrases = 0;
  for (const auto& [src, cands] : model.phrase_table()) n_phrases += cands.size();
  out << "phrases\t" << n_phrases << '\n';
  for (const auto& [src, cands] : model.phrase_table()) {
    const std::string src_ids = ids(src);
    for (const auto& cand : cands) {
      out << src_ids << '\t' << ids(join(cand.target)) << '\t'
          << hex_double(cand.log_prob) << '\n';
    }
  }
  out << "ngrams\t" << grams.size() << '\n';
  for (const auto& [k, cnt] : grams) out << ids(k) << '\t' << cnt << '\n';
  out << "end\n";
}

void save_model(const TransductionModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model " + path.string());
  save_model(model, out);
  out.flush();
  if (!out) throw IoError("write error on model " + path.string());
}

TransductionModel load_model(std::istream& in) {
  Reader r(in);
  {
    const auto f = r.fields("header");
    if (f.size() != 2 || f[0] != kMagic) r.fail("not a pardaz model file");
    int version = 0;
    if (!r.parse(f[1], version) || version != kModelFormatVersion) {
      r.fail("unsupported model format version '" + f[1] + "'");
    }
  }
  ModelConfig c;
  const std::vector<std::pair<const char*, double*>> doubles = {
      {"lm_backoff", &c.lm_backoff},
      {"lm_weight", &c.lm_weight},
      {"identity_weight", &c.identity_weight},
      {"alpha", &c.alpha},
      {"unknown_log_penalty", &c.unknown_log_penalty},
  };
  {
    const auto f = r.fields("config");
    if (f.size() != 3 || f[0] != "config" || f[1] != "lm_order" ||
        !r.parse(f[2], c.lm_order) || c.lm_order < 1) {
      r.fail("expected 'config\tlm_order\t<n>'");
    }
  }
  for (const auto& [name, slot] : doubles) {
    const auto f = r.fields("config");
    if (f.size() != 3 || f[0] != "config" || f[1] != name) {
      r.fail(std::string("expected 'config\t") + name + "'");
    }
    *slot = r.parse_hex(f[2]);
  }
  std::vector<std::string> vocab(r.section("vocab"));
  for (auto& t : vocab) {
    t = r.line("vocabulary entry");
    if (t.empty()) r.fail("empty vocabulary entry");
  }
  auto tokens = [&](std::string_view s) {
    TokenSequence out;
    for (const auto& piece : split(s)) {
      std::size_t i = 0;
      if (!r.parse(piece, i) || i >= vocab.size()) r.fail("bad token id '" + piece + "'");
      out.push_back(vocab[i]);
    }
    if (out.empty()) r.fail("empty phrase");
    return out;
  };

  std::map<std::string, std::vector<PhraseCandidate>> table;
  const std::size_t n_phrases = r.section("phrases");
  for (std::size_t i = 0; i < n_phrases; ++i) {
    const auto f = r.fields("phrase entry");
    if (f.size() != 3) r.fail("phrase entry needs 3 fields");
    table[join(tokens(f[0]))].push_back({tokens(f[1]), r.parse_hex(f[2])});
  }
  NgramLm lm(c.lm_order, c.lm_backoff);
  const std::size_t n_grams = r.section("ngrams");
  for (std::size_t i = 0; i < n_grams; ++i) {
    const auto f = r.fields("n-gram entry");
    std::uint64_t cnt = 0;
    if (f.size() != 2 || !r.parse(f[1], cnt)) r.fail("n-gram entry needs 2 fields");
    try {
      lm.set_count(tokens(f[0]), cnt);
    } catch (const FormatError&) {
      throw;
    } catch (const Error& e) {
      r.fail(e.what());
    }
  }
  if (r.line("end marker") != "end") r.fail("expected 'end'");
  TransductionModel model(c, std::move(lm));
  for (auto& [src, cands] : table) {
    try {
      model.set_candidates(split(src), std::move(cands));
    } catch (const Error& e) {
      throw FormatError(std::string("model file: ") + e.what());
    }
  }
  return model;
}

TransductionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string());
  return load_model(in);
}

}  // namespace pardaz
