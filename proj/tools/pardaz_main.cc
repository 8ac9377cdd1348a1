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

// pardaz: command-line front end for normalization, corpus generation,
// training, standardization and evaluation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pardaz/baseline.h"
#include "pardaz/bleu.h"
#include "pardaz/error.h"
#include "pardaz/gencorpus.h"
#include "pardaz/harness.h"
#include "pardaz/model.h"
#include "pardaz/normalize.h"
#include "pardaz/pipeline_config.h"
#include "pardaz/rules.h"

namespace {

using namespace pardaz;

struct Options {
  std::string config_file;
  std::vector<std::string> overrides;
  std::vector<std::string> norm_flags;
  std::string rules;
  int jobs = 0;
  bool version = false;

  // normalize / break / generate / standardize / bleu / eval
  std::string in = "-";
  std::string out = "-";
  bool detok = false;
  std::string trace_out;
  std::optional<std::uint64_t> seed;
  std::optional<double> p;
  std::string prefix;
  std::optional<std::size_t> max_sentences;
  std::string corpus;
  std::optional<int> lm_order;
  std::optional<double> lm_weight;
  bool replay = true;
  std::string system = "model";
  std::string model_file;
  std::optional<std::string> mode;
  std::optional<int> beam;
  std::string policy;
  std::string freq;
  std::string hyp;
  std::string ref;
  std::string smoothing = "exp";
  bool score_only = false;
  std::string data;
  std::string split = "test";
  std::string ref_type = "word";
  std::string report;
  std::string columns;
  std::string hyp_out;
};

PipelineConfig resolve(const Options& o) {
  PipelineConfig cfg;
  if (!o.config_file.empty()) cfg = load_pipeline_config(o.config_file);
  for (const auto& kv : o.overrides) cfg.set(kv);
  for (const auto& f : o.norm_flags) apply_normalization_flag(cfg.normalization, f);
  if (!o.rules.empty()) cfg.rule_file = o.rules;
  if (o.jobs > 0) cfg.jobs = o.jobs;
  if (o.seed) cfg.seed = *o.seed;
  if (o.p) cfg.set("skip_probability", format_double(*o.p));
  if (o.lm_order) cfg.set("lm_order", std::to_string(*o.lm_order));
  if (o.lm_weight) cfg.set("lm_weight", format_double(*o.lm_weight));
  if (o.mode) cfg.set("decode_mode", *o.mode);
  if (o.beam) cfg.set("beam", std::to_string(*o.beam));
  return cfg;
}

void stamp(const PipelineConfig& cfg, std::string_view command) {
  std::cerr << "# command=" << command << '\n';
  for (const auto& [k, v] : cfg.entries()) std::cerr << "# " << k << '=' << v << '\n';
}

RuleSet load_rules(const PipelineConfig& cfg) {
  return cfg.rule_file.empty() ? default_rule_set() : parse_rule_file(cfg.rule_file);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  std::string line;
  auto slurp = [&](std::istream& in) {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
    if (in.bad()) throw IoError("read error on " + path);
  };
  if (path == "-") {
    slurp(std::cin);
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    slurp(in);
  }
  return lines;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw IoError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw IoError("write error on " + path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

// Runs fn(i) for i in [0, n) on `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Applies fn to every line; results keep input order.
template <typename Fn>
std::vector<std::string> map_lines(const std::vector<std::string>& lines, int jobs,
                                   Fn fn) {
  std::vector<std::string> out(lines.size());
  parallel_for(lines.size(), jobs, [&](std::size_t i) { out[i] = fn(lines[i]); });
  return out;
}

DecodeConfig decode_config(const PipelineConfig& cfg) {
  DecodeConfig d;
  d.mode = cfg.decode_mode == "beam" ? DecodeConfig::Mode::kBeam
                                     : DecodeConfig::Mode::kGreedy;
  d.beam_size = cfg.beam;
  d.lm_weight = cfg.lm_weight;
  return d;
}

BaselinePolicy baseline_policy(const Options& o) {
  BaselinePolicy policy;
  std::string name = o.policy;
  if (name.empty()) name = o.freq.empty() ? "first" : "frequent";
  if (name == "first") {
    policy.ambiguity_resolution = AmbiguityResolution::kFirstListed;
  } else if (name == "frequent") {
    if (o.freq.empty()) throw Error("--policy frequent needs --freq");
    policy.frequency_table = count_frequencies(std::filesystem::path(o.freq));
  } else {
    throw Error("unknown policy '" + name + "' (expected first or frequent)");
  }
  return policy;
}

// Builds the standardizer named by --system. The returned function owns its
// model or rule set.
StandardizeFn make_system(const Options& o, const PipelineConfig& cfg) {
  if (o.system == "identity") {
    return [](const TokenSequence& s) { return s; };
  }
  if (o.system == "rules") {
    auto inverted = std::make_shared<RuleSet>(invert_rule_set(load_rules(cfg)));
    auto tagger = std::make_shared<LexiconTagger>(*inverted);
    auto policy = std::make_shared<BaselinePolicy>(baseline_policy(o));
    return [inverted, tagger, policy](const TokenSequence& s) {
      return rule_standardize(s, *inverted, *tagger, *policy);
    };
  }
  if (o.system == "model") {
    if (o.model_file.empty()) throw Error("--system model needs --model-file");
    auto model = std::make_shared<TransductionModel>(load_model(o.model_file));
    DecodeConfig d = decode_config(cfg);
    if (!o.lm_weight) d.lm_weight = -1.0;
    return [model, d](const TokenSequence& s) { return standardize(s, *model, d); };
  }
  throw Error("unknown system '" + o.system + "' (expected identity, rules or model)");
}

int run_normalize(const Options& o) {
  const PipelineConfig cfg = resolve(o);
  const auto lines = read_lines(o.in);
  const auto out_lines = map_lines(lines, cfg.jobs, [&](const std::string& l) {
    const TokenSequence t = normalize_and_tokenize(l, cfg.normalization);
    return o.detok ? detokenize(t) : join_tokens(t);
  });
  Output out(o.out);
  for (const auto& l : out_lines) out.stream() << l << '\n';
  out.close();
  return 0;
}

int run_break(const Options& o) {
  const PipelineConfig cfg = resolve(o);
  stamp(cfg, "break");
  const RuleSet rules = load_rules(cfg);
  const LexiconTagger tagger(rules);
  GeneratorConfig g;
  g.skip_probability = cfg.skip_probability;
  g.rng_seed = cfg.seed;
  const auto lines = read_lines(o.in);
  std::vector<std::string> out_lines(lines.size());
  std::vector<std::string> traces(lines.size());
  parallel_for(lines.size(), cfg.jobs, [&](std::size_t i) {
    SentenceRng rng(g.rng_seed, i);
    const auto pair = break_sentence(normalize_and_tokenize(lines[i], cfg.normalization),
                                     rules, tagger, g, rng);
    traces[i] = format_trace(pair.trace);
    out_lines[i] = join_tokens(pair.colloquial);
  });
  Output out(o.out);
  for (const auto& l : out_lines) out.stream() << l << '\n';
  out.close();
  if (!o.trace_out.empty()) {
    Output tr(o.trace_out);
    for (const auto& l : traces) tr.stream() << l << '\n';
    tr.close();
  }
  return 0;
}

int run_generate(const Options& o) {
  const PipelineConfig cfg = resolve(o);
  stamp(cfg, "generate");
  GeneratorConfig g;
  g.skip_probability = cfg.skip_probability;
  g.rng_seed = cfg.seed;
  g.rule_file = cfg.rule_file;
  g.max_sentences = o.max_sentences;
  g.normalization = cfg.normalization;
  g.jobs = cfg.jobs;
  const CorpusSummary s = generate_corpus(o.in, o.prefix, g, &std::cerr);
  std::cerr << "sentences=" << s.sentences << " converted_sentences="
            << s.converted_sentences << " applications=" << s.applications
            << " sites=" << s.sites << " skipped=" << s.skipped
            << " malformed=" << s.malformed << '\n';
  return 0;
}

int run_train(const Options& o) {
  const PipelineConfig cfg = resolve(o);
  stamp(cfg, "train");
  const auto corpus = read_corpus(o.corpus);
  ModelConfig mc;
  mc.lm_order = cfg.lm_order;
  mc.lm_weight = cfg.lm_weight;
  const RuleSet rules = load_rules(cfg);
  TrainingSummary summary;
  const TransductionModel model =
      train(corpus, mc, o.replay ? &rules : nullptr, cfg.jobs, &summary);
  save_model(model, std::filesystem::path(o.out));
  std::cerr << "pairs=" << summary.pairs << " rejected=" << summary.rejected
            << " oversized_spans=" << summary.oversized_spans
            << " phrases=" << summary.phrases << '\n';
  return 0;
}

int run_standardize(const Options& o) {
  const PipelineConfig cfg = resolve(o);
  stamp(cfg, "standardize");
  const StandardizeFn system = make_system(o, cfg);
  const auto lines = read_lines(o.in);
  const auto out_lines = map_lines(lines, cfg.jobs, [&](const std::string& l) {
    return join_tokens(system(normalize_and_tokenize(l, cfg.normalization)));
  });
  Output out(o.out);
  for (const auto& l : out_lines) out.stream() << l << '\n';
  out.close();
  return 0;
}

std::vector<TokenSequence> read_tokenized(const std::string& path) {
  std::vector<TokenSequence> out;
  for (const auto& l : read_lines(path)) out.push_back(tokenize(l));
  return out;
}

int run_bleu(const Options& o) {
  Smoothing sm;
  if (o.smoothing == "exp") {
    sm = Smoothing::kExp;
  } else if (o.smoothing == "none") {
    sm = Smoothing::kNone;
  } else {
    throw Error("unknown smoothing '" + o.smoothing + "' (expected exp or none)");
  }
  const BleuScore s = corpus_bleu(read_tokenized(o.hyp), read_tokenized(o.ref), sm);
  if (o.score_only) {
    std::cout << format_bleu(s.score) << '\n';
  } else {
    std::cout << s.to_string() << '\n';
  }
  return 0;
}

int run_eval(const Options& o) {
  const PipelineConfig cfg = resolve(o);
  stamp(cfg, "eval");
  const Split split = split_from_string(o.split);
  const ReferenceType ref = reference_from_string(o.ref_type);
  const ColumnMap columns = o.columns.empty() ? ColumnMap{} : ColumnMap::parse(o.columns);
  const auto records = load_dataset(o.data, split, columns, cfg.normalization);
  if (auto warn = check_published_counts(records, split)) {
    std::cerr << "pardaz: warning: " << *warn << '\n';
  }
  const StandardizeFn system = make_system(o, cfg);
  const EvalReport rep = evaluate(o.system, system, records, ref, cfg.jobs);
  Output out(o.report);
  out.stream() << format_report(rep);
  out.close();
  if (!o.hyp_out.empty()) {
    Output h(o.hyp_out);
    for (const auto& t : rep.hypotheses) h.stream() << join_tokens(t) << '\n';
    h.close();
  }
  return 0;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const pardaz::ParseError*>(&e)) return "parse";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const pardaz::Error*>(&e)) return "invalid";
  return "internal";
}

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Colloquial Persian standardization toolkit", "pardaz"};
  app.option_defaults()->always_capture_default();
  app.fallthrough();  // global options may follow the subcommand
  app.add_option("--config", o.config_file, "key=value config file");
  app.add_option("--set", o.overrides, "Override one config key (key=value)");
  app.add_option("--rules", o.rules, "Rule file (default: shipped rules)");
  app.add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--version", o.version, "Print version, rule hash and model format");

  auto add_norm = [&](CLI::App* sub) {
    sub->add_option("--norm", o.norm_flags, "Normalization flag key=value");
  };

  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize and tokenize text");
  normalize_cmd->add_option("--in", o.in, "Input file, - for stdin");
  normalize_cmd->add_option("--out", o.out, "Output file, - for stdout");
  normalize_cmd->add_flag("--detok", o.detok, "Write detokenized text");
  add_norm(normalize_cmd);

  auto* break_cmd = app.add_subcommand("break", "Convert standard text to colloquial");
  break_cmd->add_option("--in", o.in, "Standard text, one sentence per line");
  break_cmd->add_option("--out", o.out, "Colloquial output");
  break_cmd->add_option("--trace", o.trace_out, "Write the alignment trace here");
  break_cmd->add_option("--seed", o.seed, "Random seed");
  break_cmd->add_option("--p", o.p, "Skip probability")->check(CLI::Range(0.0, 1.0));
  add_norm(break_cmd);

  auto* gen_cmd = app.add_subcommand("generate", "Generate a synthetic parallel corpus");
  gen_cmd->add_option("--in", o.in, "Standard text, one sentence per line")->required();
  gen_cmd->add_option("--out-prefix", o.prefix, "Writes <prefix>.fab/.fa/.trace/.meta")
      ->required();
  gen_cmd->add_option("--seed", o.seed, "Random seed");
  gen_cmd->add_option("--p", o.p, "Skip probability")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--max-sentences", o.max_sentences, "Stop after this many");
  add_norm(gen_cmd);

  auto* train_cmd = app.add_subcommand("train", "Train a transduction model");
  train_cmd->add_option("--corpus", o.corpus, "Corpus prefix from generate")->required();
  train_cmd->add_option("--out", o.out, "Model file")->required();
  train_cmd->add_option("--lm-order", o.lm_order, "Language model order");
  train_cmd->add_option("--lm-weight", o.lm_weight, "Language model weight");
  train_cmd->add_flag("!--no-replay", o.replay, "Skip replaying traces against rules");

  auto* std_cmd = app.add_subcommand("standardize", "Convert colloquial text to standard");
  std_cmd->add_option("--system", o.system, "model, rules or identity");
  std_cmd->add_option("--model-file", o.model_file, "Model for --system model");
  std_cmd->add_option("--in", o.in, "Colloquial text");
  std_cmd->add_option("--out", o.out, "Standardized output");
  std_cmd->add_option("--mode", o.mode, "greedy or beam");
  std_cmd->add_option("--beam", o.beam, "Beam size")->check(CLI::PositiveNumber);
  std_cmd->add_option("--lm-weight", o.lm_weight, "Language model weight");
  std_cmd->add_option("--policy", o.policy, "Rules ambiguity policy: first or frequent");
  std_cmd->add_option("--freq", o.freq, "Standard text for token frequencies");
  add_norm(std_cmd);

  auto* bleu_cmd = app.add_subcommand("bleu", "Corpus BLEU on tokenized files");
  bleu_cmd->add_option("--hyp", o.hyp, "Hypotheses, one per line")->required();
  bleu_cmd->add_option("--ref", o.ref, "References, one per line")->required();
  bleu_cmd->add_option("--smoothing", o.smoothing, "exp or none");
  bleu_cmd->add_flag("--score-only", o.score_only, "Print only the score");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a system on a dataset split");
  eval_cmd->add_option("--data", o.data, "Dataset file or directory")->required();
  eval_cmd->add_option("--split", o.split, "dev or test");
  eval_cmd->add_option("--system", o.system, "identity, rules or model");
  eval_cmd->add_option("--model-file", o.model_file, "Model for --system model");
  eval_cmd->add_option("--ref", o.ref_type, "word or style");
  eval_cmd->add_option("--report", o.report, "Report file, - for stdout");
  eval_cmd->add_option("--columns", o.columns, "Column map, e.g. source=0,word=1,style=2");
  eval_cmd->add_option("--hyp-out", o.hyp_out, "Write hypotheses here");
  eval_cmd->add_option("--mode", o.mode, "greedy or beam");
  eval_cmd->add_option("--beam", o.beam, "Beam size")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--lm-weight", o.lm_weight, "Language model weight");
  eval_cmd->add_option("--policy", o.policy, "Rules ambiguity policy: first or frequent");
  eval_cmd->add_option("--freq", o.freq, "Standard text for token frequencies");
  add_norm(eval_cmd);

  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "pardaz: error: usage: " << one_line(e.what()) << '\n';
    std::cerr << app.help();
    return 2;
  }

  try {
    if (o.version) {
      const PipelineConfig cfg = resolve(o);
      std::cout << "pardaz " << PARDAZ_VERSION << '\n'
                << "rule_hash=" << rule_file_hash(cfg.rule_file) << '\n'
                << "model_format=" << kModelFormatVersion << '\n';
      return 0;
    }
    if (*normalize_cmd) return run_normalize(o);
    if (*break_cmd) return run_break(o);
    if (*gen_cmd) return run_generate(o);
    if (*train_cmd) return run_train(o);
    if (*std_cmd) return run_standardize(o);
    if (*bleu_cmd) return run_bleu(o);
    if (*eval_cmd) return run_eval(o);
    std::cerr << "pardaz: error: usage: a subcommand is required\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pardaz: error: " << error_kind(e) << ": " << one_line(e.what()) << '\n';
    return 1;
  }
}
