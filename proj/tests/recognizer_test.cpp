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

#include "chartail/recognizer.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "chartail/experiment.hpp"

namespace chartail {
namespace {

Charset abc() { return Charset({U'a', U'b', U'c'}); }

GlyphModel tiny_glyphs(double sigma = 0.2, std::uint64_t seed = 7) {
  GlyphModelConfig config;
  config.dim = 8;
  config.sigma = sigma;
  config.confusable_fraction = 0.0;
  return GlyphModel::make(abc(), config, seed);
}

TEST(GlyphModel, CentroidsAreUnitAndSeparated) {
  const Charset cs = make_experiment_charset(100);
  GlyphModelConfig config;
  const GlyphModel glyphs = GlyphModel::make(cs, config, 11);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    double norm_sq = 0.0;
    for (double v : glyphs.centroid(i)) norm_sq += v * v;
    EXPECT_NEAR(norm_sq, 1.0, 1e-9);
  }
  std::vector<std::vector<bool>> confusable(
      cs.size(), std::vector<bool>(cs.size(), false));
  for (const auto& [a, b] : glyphs.confusable_pairs()) {
    confusable[a][b] = confusable[b][a] = true;
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      const double cos = glyphs.cosine(i, j);
      if (confusable[i][j]) {
        EXPECT_GE(cos, 0.95);
      } else {
        EXPECT_LT(cos, 0.9);
      }
    }
  }
  // 5% of 100 symbols -> 2 pairs.
  EXPECT_EQ(glyphs.confusable_pairs().size(), 2u);
}

TEST(GlyphModel, DeterministicPerSeed) {
  const Charset cs = make_experiment_charset(30);
  GlyphModelConfig config;
  config.dim = 8;
  const GlyphModel a = GlyphModel::make(cs, config, 5);
  const GlyphModel b = GlyphModel::make(cs, config, 5);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(a.centroid(i), b.centroid(i));
  }
}

TEST(Render, SigmaControlsNoise) {
  const GlyphModel glyphs = tiny_glyphs(1e-12);
  const auto observations = render(U"abc", glyphs, 3);
  ASSERT_EQ(observations.size(), 3u);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t i = 0; i < glyphs.dim(); ++i) {
      EXPECT_NEAR(observations[t][i], glyphs.centroid(t)[i], 1e-9);
    }
  }
}

TEST(Render, DeterministicPerWordAndSeed) {
  const GlyphModel glyphs = tiny_glyphs(0.5);
  EXPECT_EQ(render(U"ab", glyphs, 9), render(U"ab", glyphs, 9));
  EXPECT_NE(render(U"ab", glyphs, 9), render(U"ab", glyphs, 10));
  EXPECT_NE(render(U"ab", glyphs, 9), render(U"ba", glyphs, 9));
  EXPECT_THROW(render(U"xy", glyphs, 9), Error);
}

TEST(BigramLM, AddKSmoothingLimits) {
  const Charset cs = abc();
  const std::vector<std::u32string> words = {U"ab"};
  // With k -> 0 the seen transition dominates.
  const BigramLM sharp = BigramLM::fit(words, cs, 1e-9);
  const int a = 0;
  const int b = 1;
  EXPECT_NEAR(sharp.prob(a, b), 1.0, 1e-6);
  EXPECT_NEAR(sharp.prob(BigramLM::kStart, a), 1.0, 1e-6);
  EXPECT_NEAR(sharp.prob(b, sharp.eos_class()), 1.0, 1e-6);
  // Rows always sum to one and every entry is positive.
  const BigramLM smooth = BigramLM::fit(words, cs, 1.0);
  for (int prev = BigramLM::kStart; prev < 3; ++prev) {
    double row = 0.0;
    for (int next = 0; next <= smooth.eos_class(); ++next) {
      EXPECT_GT(smooth.prob(prev, next), 0.0);
      row += smooth.prob(prev, next);
    }
    EXPECT_NEAR(row, 1.0, 1e-9);
  }
}

TEST(FitExpert, PriorIsPerOccurrence) {
  const GlyphModel glyphs = tiny_glyphs();
  const std::vector<std::u32string> words = {U"aab", U"c"};
  const ExpertModel cf =
      fit_expert(ExpertKind::kContextFree, words, glyphs, 1.0);
  EXPECT_FALSE(cf.lm.has_value());
  EXPECT_NEAR(cf.prior[0], 0.5, 1e-12);   // a: 2 of 4
  EXPECT_NEAR(cf.prior[1], 0.25, 1e-12);  // b
  EXPECT_NEAR(cf.prior[2], 0.25, 1e-12);  // c
  const ExpertModel ca =
      fit_expert(ExpertKind::kContextAware, words, glyphs, 1.0);
  EXPECT_TRUE(ca.lm.has_value());
}

TEST(FitExpert, ContextFreeIgnoresWordOrder) {
  const GlyphModel glyphs = tiny_glyphs();
  const std::vector<std::u32string> words = {U"ab", U"ca"};
  const std::vector<std::u32string> shuffled = {U"ba", U"ac"};
  const ExpertModel one =
      fit_expert(ExpertKind::kContextFree, words, glyphs, 1.0);
  const ExpertModel two =
      fit_expert(ExpertKind::kContextFree, shuffled, glyphs, 1.0);
  EXPECT_EQ(one.prior, two.prior);
}

TEST(Decode, PerfectWhenNoiseless) {
  const GlyphModel glyphs = tiny_glyphs(1e-6);
  const std::vector<std::u32string> train = {U"ab", U"bc", U"ca"};
  const ExpertModel cf =
      fit_expert(ExpertKind::kContextFree, train, glyphs, 1.0);
  const ExpertModel ca =
      fit_expert(ExpertKind::kContextAware, train, glyphs, 1.0);
  for (const std::u32string& word : {std::u32string(U"abc"),
                                     std::u32string(U"cab")}) {
    const auto observations = render(word, glyphs, 13);
    EXPECT_EQ(decode(cf, observations).word, word);
    EXPECT_EQ(decode(ca, observations).word, word);
  }
}

TEST(Decode, EmitsNormalizedStepsAndTerminalEos) {
  const GlyphModel glyphs = tiny_glyphs(0.4);
  const std::vector<std::u32string> train = {U"ab", U"bc"};
  const ExpertModel cf =
      fit_expert(ExpertKind::kContextFree, train, glyphs, 1.0);
  const ExpertModel ca =
      fit_expert(ExpertKind::kContextAware, train, glyphs, 1.0);
  const auto observations = render(U"ab", glyphs, 17);
  for (const ExpertModel* expert : {&cf, &ca}) {
    const Prediction p = decode(*expert, observations);
    ASSERT_EQ(p.steps.size(), observations.size() + 1);
    for (const StepDistribution& step : p.steps) {
      step.validate_distribution(1e-9);
    }
    EXPECT_EQ(p.word.size(), observations.size());
  }
  // Context-free terminal step is a point mass on EOS.
  const Prediction p = decode(cf, observations);
  EXPECT_DOUBLE_EQ(p.steps.back().prob_of(kEos), 1.0);
  // Context-aware terminal EOS probability comes from the language model.
  const Prediction q = decode(ca, observations);
  const auto b_cls = glyphs.charset().index_of(q.word.back());
  ASSERT_TRUE(b_cls.has_value());
  EXPECT_NEAR(q.steps.back().prob_of(kEos),
              ca.lm->prob(*b_cls, ca.lm->eos_class()), 1e-12);
}

TEST(Decode, EmptyObservationsGiveEmptyWord) {
  const GlyphModel glyphs = tiny_glyphs();
  const std::vector<std::u32string> train = {U"ab"};
  const ExpertModel cf =
      fit_expert(ExpertKind::kContextFree, train, glyphs, 1.0);
  const std::vector<std::vector<double>> no_observations;
  const Prediction p = decode(cf, no_observations);
  EXPECT_EQ(p.length(), 0u);
  EXPECT_TRUE(std::isinf(confidence_score(p)));
}

TEST(Decode, LanguageModelBreaksVisualTies) {
  // Ambiguous second observation exactly between the 'b' and 'c'
  // centroids: the LM trained on {"ab"} resolves it toward 'b', the
  // balanced context-free expert leaves it a coin toss decided by the
  // deterministic argmax tie rule.
  const Charset cs = abc();
  GlyphModelConfig config;
  config.dim = 8;
  config.sigma = 0.3;
  config.confusable_fraction = 0.0;
  const GlyphModel glyphs = GlyphModel::make(cs, config, 19);
  const std::vector<std::u32string> ca_train = {U"ab"};
  // Balanced training list: uniform prior over a, b, c.
  const std::vector<std::u32string> cf_train = {U"abc", U"bca", U"cab"};
  const ExpertModel ca =
      fit_expert(ExpertKind::kContextAware, ca_train, glyphs, 0.001);
  const ExpertModel cf =
      fit_expert(ExpertKind::kContextFree, cf_train, glyphs, 0.001);

  std::vector<std::vector<double>> observations;
  observations.push_back(glyphs.centroid(0));  // exact 'a'
  std::vector<double> midpoint(glyphs.dim());
  for (std::size_t i = 0; i < glyphs.dim(); ++i) {
    midpoint[i] = 0.5 * (glyphs.centroid(1)[i] + glyphs.centroid(2)[i]);
  }
  observations.push_back(midpoint);

  const Prediction pred_ca = decode(ca, observations);
  EXPECT_EQ(pred_ca.word, U"ab");
  const Prediction pred_cf = decode(cf, observations);
  // Posterior symmetry: identical probability on 'b' and 'c'.
  EXPECT_DOUBLE_EQ(pred_cf.steps[1].prob_of(U'b'),
                   pred_cf.steps[1].prob_of(U'c'));
  EXPECT_EQ(pred_cf.word, U"ab");  // tie resolved to the lower class index
}

TEST(Decode, UniformLmMatchesUniformPriorExpert) {
  // With a uniform LM and a uniform prior the two posteriors coincide on
  // every character step.
  const Charset cs = abc();
  GlyphModelConfig config;
  config.dim = 8;
  config.sigma = 0.5;
  config.confusable_fraction = 0.0;
  const GlyphModel glyphs = GlyphModel::make(cs, config, 23);
  // One occurrence of every symbol and transition count zero everywhere
  // except what cancels: a huge smoothing k drives both models uniform.
  const std::vector<std::u32string> train = {U"abc", U"bca", U"cab"};
  const ExpertModel ca =
      fit_expert(ExpertKind::kContextAware, train, glyphs, 1e9);
  const ExpertModel cf =
      fit_expert(ExpertKind::kContextFree, train, glyphs, 1e9);
  const auto observations = render(U"acb", glyphs, 29);
  const Prediction pred_ca = decode(ca, observations);
  const Prediction pred_cf = decode(cf, observations);
  for (std::size_t t = 0; t < observations.size(); ++t) {
    for (char32_t c : cs.symbols()) {
      EXPECT_NEAR(pred_ca.steps[t].prob_of(c), pred_cf.steps[t].prob_of(c),
                  1e-9);
    }
  }
}

TEST(Decode, DeterministicGivenExpertAndObservations) {
  const GlyphModel glyphs = tiny_glyphs(0.6);
  const std::vector<std::u32string> train = {U"ab", U"bc", U"ca"};
  const ExpertModel ca =
      fit_expert(ExpertKind::kContextAware, train, glyphs, 0.5);
  const auto observations = render(U"abcab", glyphs, 31);
  const Prediction first = decode(ca, observations);
  const Prediction second = decode(ca, observations);
  EXPECT_EQ(first.word, second.word);
  ASSERT_EQ(first.steps.size(), second.steps.size());
  for (std::size_t t = 0; t < first.steps.size(); ++t) {
    EXPECT_EQ(first.steps[t].entries().size(),
              second.steps[t].entries().size());
  }
}

TEST(Experiment, SmokeRunSatisfiesStructuralInvariants) {
  ExperimentConfig config;
  config.charset_size = 80;
  config.n_train = 4000;
  config.n_test = 150;
  config.vocab_size = 3000;
  config.seeds = {5};
  const ExperimentReport report = run_experiment(config);
  ASSERT_EQ(report.seeds.size(), 1u);
  const SeedReport& seed = report.seeds[0];
  for (const TestSet set : kAllTestSets) {
    const TestSetEval& eval = seed.test_set(set);
    EXPECT_NEAR(eval.selection_ratio_ca + eval.selection_ratio_cf, 1.0,
                1e-12);
    EXPECT_NEAR(eval.many_proportion + eval.medium_proportion +
                    eval.few_proportion,
                1.0, 1e-9);
    for (const Method method : kAllMethods) {
      const double acc = eval.method(method).word_accuracy;
      EXPECT_GE(acc, 0.0);
      EXPECT_LE(acc, 1.0);
    }
  }
  EXPECT_EQ(seed.test_set(TestSet::kCombined).n_words, 3 * config.n_test);
  EXPECT_FALSE(seed.gt_prob_curve.empty());
  // Ranks are 1..n in train-count order.
  for (std::size_t i = 1; i < seed.gt_prob_curve.size(); ++i) {
    EXPECT_EQ(seed.gt_prob_curve[i].rank, i + 1);
    EXPECT_LE(seed.gt_prob_curve[i].train_count,
              seed.gt_prob_curve[i - 1].train_count);
  }
}

TEST(Experiment, DeterministicPerSeed) {
  ExperimentConfig config;
  config.charset_size = 60;
  config.n_train = 2000;
  config.n_test = 80;
  config.vocab_size = 1500;
  config.seeds = {9};
  const ExperimentReport a = run_experiment(config);
  const ExperimentReport b = run_experiment(config);
  for (const TestSet set : kAllTestSets) {
    for (const Method method : kAllMethods) {
      EXPECT_DOUBLE_EQ(a.mean_accuracy(set, method),
                       b.mean_accuracy(set, method));
    }
  }
}

TEST(Experiment, FailsWithoutFewCharacters) {
  ExperimentConfig config;
  config.charset_size = 5;  // tiny charset: everything lands in Many
  config.n_train = 5000;
  config.n_test = 50;
  config.vocab_size = 200;
  config.seeds = {3};
  EXPECT_THROW(run_experiment(config), Error);
}

}  // namespace
}  // namespace chartail
