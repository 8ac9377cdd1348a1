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

// Python bindings for the pardaz library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "pardaz/baseline.h"
#include "pardaz/bleu.h"
#include "pardaz/error.h"
#include "pardaz/gencorpus.h"
#include "pardaz/model.h"
#include "pardaz/normalize.h"
#include "pardaz/rules.h"

namespace py = pybind11;

namespace pardaz {
namespace {

const RuleSet& inverted_default_rules() {
  static const RuleSet inverted = invert_rule_set(default_rule_set());
  return inverted;
}

py::list trace_to_python(const std::vector<RuleApplication>& trace) {
  py::list out;
  for (const auto& a : trace) {
    out.append(py::make_tuple(a.rule_id, py::make_tuple(a.source.begin, a.source.end),
                              py::make_tuple(a.target.begin, a.target.end)));
  }
  return out;
}

}  // namespace
}  // namespace pardaz

PYBIND11_MODULE(_pardaz, m) {
  using namespace pardaz;
  m.doc() = "Colloquial-to-standard Persian text conversion.";
  m.attr("__version__") = PARDAZ_VERSION;
  m.attr("MODEL_FORMAT_VERSION") = kModelFormatVersion;

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<FormatError>(m, "FormatError", error.ptr());

  m.def("normalize", [](const std::string& text) { return normalize_text(text); },
        py::arg("text"), "Normalize raw text (character variants, digits, spacing).");
  m.def("tokenize", [](const std::string& text) { return normalize_and_tokenize(text); },
        py::arg("text"), "Normalize and split into tokens.");
  m.def("detokenize", &detokenize, py::arg("tokens"));
  m.def("default_rules_text", [] { return std::string(default_rules_text()); });

  m.def(
      "apply_rules",
      [](const TokenSequence& tokens) {
        const Rewrite rw = apply_rules(tokens, default_rule_set());
        return py::make_tuple(rw.output, trace_to_python(rw.trace));
      },
      py::arg("tokens"),
      "Apply every matching rule; returns (colloquial tokens, trace).");

  m.def(
      "break_sentence",
      [](const TokenSequence& tokens, double p, std::uint64_t seed, std::uint64_t index) {
        GeneratorConfig cfg;
        cfg.skip_probability = p;
        cfg.rng_seed = seed;
        validate(cfg);
        SentenceRng rng(seed, index);
        const AlignedPair pair = break_sentence(tokens, default_rule_set(), cfg, rng);
        return py::make_tuple(pair.colloquial, trace_to_python(pair.trace));
      },
      py::arg("tokens"), py::arg("p") = 0.1, py::arg("seed") = 0, py::arg("index") = 0,
      "Convert one standard sentence, skipping each site with probability p.");

  m.def(
      "rule_standardize",
      [](const TokenSequence& tokens, std::optional<FrequencyTable> freq) {
        BaselinePolicy policy;
        if (freq) {
          policy.frequency_table = std::move(freq);
        } else {
          policy.ambiguity_resolution = AmbiguityResolution::kFirstListed;
        }
        const RuleSet& inv = inverted_default_rules();
        return rule_standardize(tokens, inv, LexiconTagger(inv), policy);
      },
      py::arg("tokens"), py::arg("frequencies") = py::none(),
      "Rule baseline; most-frequent policy when a frequency table is given.");

  py::class_<TransductionModel>(m, "Model")
      .def_static(
          "train",
          [](const std::vector<std::pair<TokenSequence, TokenSequence>>& pairs,
             int lm_order, double lm_weight, bool replay, int jobs) {
            std::vector<AlignedPair> corpus;
            corpus.reserve(pairs.size());
            for (const auto& [colloquial, standard] : pairs) {
              AlignedPair p;
              p.colloquial = colloquial;
              p.standard = standard;
              p.trace = apply_rules(standard, default_rule_set()).trace;
              corpus.push_back(std::move(p));
            }
            ModelConfig cfg;
            cfg.lm_order = lm_order;
            cfg.lm_weight = lm_weight;
            py::gil_scoped_release release;
            return train(corpus, cfg, replay ? &default_rule_set() : nullptr, jobs);
          },
          py::arg("pairs"), py::arg("lm_order") = 3, py::arg("lm_weight") = 1.0,
          py::arg("replay") = false, py::arg("jobs") = 1,
          "Train from (colloquial, standard) token pairs aligned by the shipped rules.")
      .def_static(
          "from_corpus",
          [](const std::filesystem::path& prefix, int jobs) {
            const auto corpus = read_corpus(prefix);
            py::gil_scoped_release release;
            return train(corpus, {}, &default_rule_set(), jobs);
          },
          py::arg("prefix"), py::arg("jobs") = 1)
      .def_static("load",
                  [](const std::filesystem::path& path) { return load_model(path); },
                  py::arg("path"))
      .def("save",
           [](const TransductionModel& m, const std::filesystem::path& path) {
             save_model(m, path);
           },
           py::arg("path"))
      .def(
          "standardize",
          [](const TransductionModel& m, const TokenSequence& tokens, int beam) {
            DecodeConfig cfg;
            if (beam > 0) {
              cfg.mode = DecodeConfig::Mode::kBeam;
              cfg.beam_size = beam;
            }
            const DecodeResult r = decode(tokens, m, cfg);
            return py::make_tuple(r.output, r.score);
          },
          py::arg("tokens"), py::arg("beam") = 0,
          "Decode; greedy when beam is 0. Returns (tokens, log score).")
      .def_property_readonly("phrases",
                             [](const TransductionModel& m) { return m.phrase_table().size(); });

  m.def(
      "corpus_bleu",
      [](const std::vector<TokenSequence>& hyp, const std::vector<TokenSequence>& ref,
         bool smooth) {
        return corpus_bleu(hyp, ref, smooth ? Smoothing::kExp : Smoothing::kNone).score;
      },
      py::arg("hypotheses"), py::arg("references"), py::arg("smooth") = true,
      "Corpus BLEU (0-100) over pre-tokenized sentences.");
}
