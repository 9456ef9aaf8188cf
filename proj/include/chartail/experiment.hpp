// Copyright 2026 The chartail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHARTAIL_EXPERIMENT_HPP_
#define CHARTAIL_EXPERIMENT_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chartail/alignment.hpp"
#include "chartail/charset.hpp"
#include "chartail/ensemble.hpp"
#include "chartail/error.hpp"
#include "chartail/metrics.hpp"
#include "chartail/recognizer.hpp"
#include "chartail/synth.hpp"

namespace chartail {

/// Desk-scale two-expert experiment: a context-aware expert fitted on the
/// long-tailed word set, a context-free expert fitted on the balanced
/// set, both evaluated with the word-level and character-level ensembles
/// on a common-word test, a hard test (words containing at least one Few
/// character), and a balanced random test.
struct ExperimentConfig {
  std::size_t charset_size = 200;
  std::size_t dim = 16;
  // 0.30 puts raw per-character accuracy around 0.6, which leaves room
  // for both language-model gains and ensemble gains at desk scale.
  double sigma = 0.30;
  double confusable_fraction = 0.05;
  double zipf_exponent = 1.0;  // word-frequency exponent
  std::size_t n_train = 50000;
  std::size_t n_test = 2000;
  std::size_t max_len = 25;
  double smoothing_k = 0.5;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  // Corpus composition (see ZipfCorpusConfig).
  std::size_t vocab_size = 100000;
  double char_exponent = 2.5;
  double char_shift = 15.0;
  double mean_word_len = 5.5;
  CategoryThresholds thresholds{};

  void validate() const {
    require(charset_size >= 2, "charset_size must be at least 2");
    require(dim >= 2, "dim must be at least 2");
    require(sigma > 0.0, "sigma must be positive");
    require(zipf_exponent >= 0.0, "zipf_exponent must be non-negative");
    require(n_train >= 1 && n_test >= 1, "n_train and n_test must be >= 1");
    require(max_len >= 1, "max_len must be at least 1");
    require(smoothing_k > 0.0, "smoothing_k must be positive");
    require(!seeds.empty(), "at least one seed is required");
    require(vocab_size >= 2, "vocab_size must be at least 2");
    require(mean_word_len >= 1.0, "mean_word_len must be at least 1");
    thresholds.validate();
  }
};

enum class TestSet { kCommon = 0, kHard = 1, kRandom = 2, kCombined = 3 };
inline constexpr std::array<TestSet, 4> kAllTestSets = {
    TestSet::kCommon, TestSet::kHard, TestSet::kRandom, TestSet::kCombined};

inline std::string to_string(TestSet s) {
  switch (s) {
    case TestSet::kCommon:
      return "common";
    case TestSet::kHard:
      return "hard";
    case TestSet::kRandom:
      return "random";
    default:
      return "combined";
  }
}

enum class Method { kContextAware = 0, kContextFree = 1, kEnsembleWord = 2,
                    kEnsembleChar = 3 };
inline constexpr std::array<Method, 4> kAllMethods = {
    Method::kContextAware, Method::kContextFree, Method::kEnsembleWord,
    Method::kEnsembleChar};

inline std::string to_string(Method m) {
  switch (m) {
    case Method::kContextAware:
      return "context_aware";
    case Method::kContextFree:
      return "context_free";
    case Method::kEnsembleWord:
      return "ensemble_word";
    default:
      return "ensemble_char";
  }
}

struct MethodEval {
  double word_accuracy = 0.0;
  // Category means of per-character F1; nan when a category has no
  // active character.
  double f1_few = 0.0;
  double f1_medium = 0.0;
  double f1_many = 0.0;
  double f1_macro = 0.0;
};

struct TestSetEval {
  std::size_t n_words = 0;
  std::array<MethodEval, 4> methods{};
  double selection_ratio_ca = 0.0;  // word-level ensemble decisions
  double selection_ratio_cf = 0.0;
  // Occurrence-weighted category composition of the ground truth.
  double many_proportion = 0.0;
  double medium_proportion = 0.0;
  double few_proportion = 0.0;

  const MethodEval& method(Method m) const {
    return methods[static_cast<std::size_t>(m)];
  }
};

/// Mean probability assigned to the ground-truth character by each
/// expert, per character, over the combined test; ranked by training
/// count.
struct GtProbRow {
  std::size_t rank = 0;
  char32_t symbol = 0;
  std::int64_t train_count = 0;
  CharCategory category = CharCategory::kFew;
  double mean_p_ca = 0.0;
  double mean_p_cf = 0.0;
  std::int64_t observations = 0;
};

struct SeedReport {
  std::uint64_t seed = 0;
  std::array<TestSetEval, 4> test_sets{};
  std::vector<GtProbRow> gt_prob_curve;
  std::array<std::int64_t, 3> charset_category_count{};

  const TestSetEval& test_set(TestSet s) const {
    return test_sets[static_cast<std::size_t>(s)];
  }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SeedReport> seeds;

  double mean_accuracy(TestSet s, Method m) const {
    double total = 0.0;
    for (const SeedReport& r : seeds) {
      total += r.test_set(s).method(m).word_accuracy;
    }
    return total / static_cast<double>(seeds.size());
  }
};

namespace detail {

struct SetAccumulator {
  std::vector<std::u32string> gts;
  std::array<std::vector<std::u32string>, 4> outputs;  // per method
  std::array<CharTally, 4> tallies;
  std::int64_t chosen_ca = 0;
  std::array<std::int64_t, 3> char_occurrences{};

  void add_occurrences(const std::u32string& gt, const CategoryMap& cats) {
    for (char32_t c : gt) {
      ++char_occurrences[static_cast<std::size_t>(category_of(cats, c))];
    }
  }
};

inline TestSetEval finalize_set(const SetAccumulator& acc,
                                const CategoryMap& categories) {
  TestSetEval eval;
  eval.n_words = acc.gts.size();
  for (std::size_t m = 0; m < 4; ++m) {
    MethodEval& me = eval.methods[m];
    me.word_accuracy = word_accuracy(acc.gts, acc.outputs[m]);
    const CharF1Report report = char_f1(acc.tallies[m], categories);
    me.f1_few = report.f1_of(CharCategory::kFew);
    me.f1_medium = report.f1_of(CharCategory::kMedium);
    me.f1_many = report.f1_of(CharCategory::kMany);
    me.f1_macro = report.macro_f1;
  }
  eval.selection_ratio_ca = static_cast<double>(acc.chosen_ca) /
                            static_cast<double>(acc.gts.size());
  eval.selection_ratio_cf = 1.0 - eval.selection_ratio_ca;
  const double occ_total = static_cast<double>(
      acc.char_occurrences[0] + acc.char_occurrences[1] +
      acc.char_occurrences[2]);
  if (occ_total > 0) {
    eval.few_proportion = acc.char_occurrences[0] / occ_total;
    eval.medium_proportion = acc.char_occurrences[1] / occ_total;
    eval.many_proportion = acc.char_occurrences[2] / occ_total;
  }
  return eval;
}

}  // namespace detail

/// Generated charset for self-contained runs: consecutive CJK ideographs,
/// so symbol index doubles as frequency rank in the generated corpus.
inline Charset make_experiment_charset(std::size_t size) {
  std::vector<char32_t> symbols;
  symbols.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    symbols.push_back(static_cast<char32_t>(0x4E00 + i));
  }
  return Charset(std::move(symbols));
}

/// Runs one seed. When `external_corpus` is given it replaces the
/// generated corpus (the charset must cover it); otherwise the corpus is
/// generated from the config.
inline SeedReport run_experiment_seed(const ExperimentConfig& config,
                                      std::uint64_t seed,
                                      const Corpus* external_corpus = nullptr,
                                      const Charset* external_charset = nullptr) {
  config.validate();
  require((external_corpus == nullptr) == (external_charset == nullptr),
          "external corpus and charset must be given together");
  const Charset charset = external_charset != nullptr
                              ? *external_charset
                              : make_experiment_charset(config.charset_size);
  Corpus generated;
  if (external_corpus == nullptr) {
    ZipfCorpusConfig corpus_config;
    corpus_config.vocab_size = config.vocab_size;
    corpus_config.word_exponent = config.zipf_exponent;
    corpus_config.char_exponent = config.char_exponent;
    corpus_config.char_shift = config.char_shift;
    corpus_config.mean_word_len = config.mean_word_len;
    corpus_config.max_len = config.max_len;
    generated = make_zipf_corpus(charset, corpus_config, mix_seed(seed, 1));
  }
  const Corpus& corpus =
      external_corpus != nullptr ? *external_corpus : generated;

  GlyphModelConfig glyph_config;
  glyph_config.dim = config.dim;
  glyph_config.sigma = config.sigma;
  glyph_config.confusable_fraction = config.confusable_fraction;
  const GlyphModel glyphs =
      GlyphModel::make(charset, glyph_config, mix_seed(seed, 2));

  const std::vector<std::u32string> ws_train =
      sample_wiki(corpus, config.n_train, mix_seed(seed, 3));
  const LengthModel length_model = LengthModel::empirical(corpus);
  const std::vector<std::u32string> rs_train = sample_random(
      charset, config.n_train, length_model, mix_seed(seed, 4));

  const FrequencyTable train_table =
      build_frequency_table(ws_train, charset, CountMode::kPerSample);
  const CategoryMap categories = categorize(train_table, config.thresholds);

  SeedReport report;
  report.seed = seed;
  for (const auto& [c, cat] : categories) {
    ++report.charset_category_count[static_cast<std::size_t>(cat)];
  }

  // Hard test pool: vocabulary words containing at least one Few
  // character, drawn uniformly so the test is not dominated by the few
  // well-trained tail words.
  std::vector<std::size_t> hard_pool;
  for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
    for (char32_t c : corpus.entries[i].word) {
      if (category_of(categories, c) == CharCategory::kFew) {
        hard_pool.push_back(i);
        break;
      }
    }
  }
  if (report.charset_category_count[0] == 0 || hard_pool.empty()) {
    fail("insufficient Few characters in the synthetic setup; increase "
         "charset_size or reduce n_train");
  }

  const ExpertModel ca = fit_expert(ExpertKind::kContextAware, ws_train,
                                    glyphs, config.smoothing_k);
  const ExpertModel cf = fit_expert(ExpertKind::kContextFree, rs_train,
                                    glyphs, config.smoothing_k);

  std::vector<std::u32string> common_test =
      sample_wiki(corpus, config.n_test, mix_seed(seed, 5));
  std::vector<std::u32string> hard_test;
  {
    Rng rng(mix_seed(seed, 6));
    hard_test.reserve(config.n_test);
    for (std::size_t i = 0; i < config.n_test; ++i) {
      hard_test.push_back(
          corpus.entries[hard_pool[rng.next_index(hard_pool.size())]].word);
    }
  }
  std::vector<std::u32string> random_test = sample_random(
      charset, config.n_test, length_model, mix_seed(seed, 7));

  std::array<detail::SetAccumulator, 4> accumulators;
  std::map<char32_t, std::array<double, 2>> gt_prob_sums;
  std::map<char32_t, std::int64_t> gt_prob_counts;

  const std::array<std::span<const std::u32string>, 3> sets = {
      std::span<const std::u32string>(common_test),
      std::span<const std::u32string>(hard_test),
      std::span<const std::u32string>(random_test)};
  for (std::size_t set_idx = 0; set_idx < sets.size(); ++set_idx) {
    const std::uint64_t render_stream = mix_seed(seed, 8 + set_idx);
    for (std::size_t i = 0; i < sets[set_idx].size(); ++i) {
      const std::u32string& gt = sets[set_idx][i];
      const auto observations =
          render(gt, glyphs, mix_seed(render_stream, i));
      const Prediction pred_ca = decode(ca, observations, config.max_len);
      const Prediction pred_cf = decode(cf, observations, config.max_len);
      const EnsembleDecision decision = word_level_ensemble(pred_ca, pred_cf);
      const std::u32string char_word = char_level_ensemble(pred_ca, pred_cf);

      const std::array<const std::u32string*, 4> outputs = {
          &pred_ca.word, &pred_cf.word, &decision.word, &char_word};
      // Per-sample results land in this set's accumulator and Combined.
      for (const std::size_t target :
           {set_idx, static_cast<std::size_t>(TestSet::kCombined)}) {
        detail::SetAccumulator& acc = accumulators[target];
        acc.gts.push_back(gt);
        acc.add_occurrences(gt, categories);
        if (decision.chosen == ExpertKind::kContextAware) ++acc.chosen_ca;
        for (std::size_t m = 0; m < 4; ++m) {
          acc.outputs[m].push_back(*outputs[m]);
          acc.tallies[m].add(align(gt, *outputs[m]), &charset);
        }
      }
      // Probability assigned to the ground-truth character, per step.
      const std::size_t upto =
          std::min({gt.size(), pred_ca.steps.size(), pred_cf.steps.size()});
      for (std::size_t t = 0; t < upto; ++t) {
        auto& sums = gt_prob_sums[gt[t]];
        sums[0] += pred_ca.steps[t].prob_of(gt[t]);
        sums[1] += pred_cf.steps[t].prob_of(gt[t]);
        ++gt_prob_counts[gt[t]];
      }
    }
  }

  for (std::size_t s = 0; s < 4; ++s) {
    report.test_sets[s] = detail::finalize_set(accumulators[s], categories);
  }

  // Probability-vs-rank curve, ranked by training count (descending).
  std::vector<GtProbRow> curve;
  for (const auto& [symbol, sums] : gt_prob_sums) {
    GtProbRow row;
    row.symbol = symbol;
    row.train_count = train_table.count(symbol);
    row.category = category_of(categories, symbol);
    row.observations = gt_prob_counts[symbol];
    row.mean_p_ca = sums[0] / static_cast<double>(row.observations);
    row.mean_p_cf = sums[1] / static_cast<double>(row.observations);
    curve.push_back(row);
  }
  std::sort(curve.begin(), curve.end(),
            [](const GtProbRow& a, const GtProbRow& b) {
              if (a.train_count != b.train_count) {
                return a.train_count > b.train_count;
              }
              return a.symbol < b.symbol;
            });
  for (std::size_t i = 0; i < curve.size(); ++i) curve[i].rank = i + 1;
  report.gt_prob_curve = std::move(curve);
  return report;
}

inline ExperimentReport run_experiment(
    const ExperimentConfig& config, const Corpus* external_corpus = nullptr,
    const Charset* external_charset = nullptr) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.seeds.reserve(config.seeds.size());
  for (const std::uint64_t seed : config.seeds) {
    report.seeds.push_back(run_experiment_seed(config, seed, external_corpus,
                                               external_charset));
  }
  return report;
}

}  // namespace chartail

#endif  // CHARTAIL_EXPERIMENT_HPP_
