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

#include "chartail/ensemble.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace chartail {
namespace {

// A sparse step whose argmax is `symbol` with probability p; unlisted
// symbols carry probability zero (the top-k file convention).
StepDistribution step(char32_t symbol, double p) {
  return StepDistribution({{symbol, p}});
}

Prediction from_chars(const std::vector<std::pair<char32_t, double>>& chars,
                      bool terminal_eos = true) {
  std::vector<StepDistribution> steps;
  for (const auto& [c, p] : chars) steps.push_back(step(c, p));
  if (terminal_eos) steps.push_back(StepDistribution({{kEos, 1.0}}));
  return Prediction::from_steps(std::move(steps));
}

TEST(Prediction, DecodesWordBeforeEos) {
  const Prediction p = from_chars({{U'a', 0.9}, {U'b', 0.8}});
  EXPECT_EQ(p.word, U"ab");
  EXPECT_EQ(p.length(), 2u);
  ASSERT_EQ(p.word_probs.size(), 2u);
  EXPECT_DOUBLE_EQ(p.word_probs[0], 0.9);
  EXPECT_DOUBLE_EQ(p.word_probs[1], 0.8);
  EXPECT_EQ(p.decoded.back(), kEos);
}

TEST(Prediction, StepsAfterEosAreIgnored) {
  std::vector<StepDistribution> steps;
  steps.push_back(step(U'a', 0.7));
  steps.push_back(StepDistribution({{kEos, 0.9}, {U'a', 0.1}}));
  steps.push_back(step(U'b', 0.99));
  steps.push_back(StepDistribution({{kPad, 1.0}}));
  const Prediction p = Prediction::from_steps(std::move(steps));
  EXPECT_EQ(p.word, U"a");
  EXPECT_EQ(p.length(), 1u);
}

TEST(Prediction, PadStepsAreSkipped) {
  std::vector<StepDistribution> steps;
  steps.push_back(step(U'a', 0.7));
  steps.push_back(StepDistribution({{kPad, 1.0}}));
  steps.push_back(step(U'b', 0.6));
  const Prediction p = Prediction::from_steps(std::move(steps));
  EXPECT_EQ(p.word, U"ab");
  ASSERT_EQ(p.word_probs.size(), 2u);
  EXPECT_DOUBLE_EQ(p.word_probs[1], 0.6);
}

TEST(Prediction, RejectsOverlongWords) {
  std::vector<StepDistribution> steps;
  for (int i = 0; i < 26; ++i) steps.push_back(step(U'a', 0.9));
  EXPECT_THROW(Prediction::from_steps(std::move(steps), 25), Error);
}

TEST(SequenceProbability, MultipliesMaxProbs) {
  EXPECT_DOUBLE_EQ(sequence_probability(from_chars({{U'a', 1.0}})), 1.0);
  EXPECT_DOUBLE_EQ(
      sequence_probability(from_chars({{U'a', 0.5}, {U'b', 0.5}})), 0.25);
}

TEST(SequenceProbability, StopsAtEos) {
  std::vector<StepDistribution> steps;
  steps.push_back(step(U'a', 0.5));
  steps.push_back(StepDistribution({{kEos, 1.0}}));
  steps.push_back(step(U'b', 0.9));
  const Prediction p = Prediction::from_steps(std::move(steps));
  EXPECT_DOUBLE_EQ(sequence_probability(p), 0.5);
}

TEST(SequenceProbability, EmptyPredictionIsAnError) {
  std::vector<StepDistribution> steps;
  steps.push_back(StepDistribution({{kEos, 1.0}}));
  const Prediction p = Prediction::from_steps(std::move(steps));
  EXPECT_THROW(sequence_probability(p), Error);
}

TEST(ConfidenceScore, AnalyticValues) {
  EXPECT_DOUBLE_EQ(confidence_score(from_chars({{U'a', 1.0}})), 0.0);
  const Prediction p =
      from_chars({{U'a', std::exp(-1.0)}, {U'b', std::exp(-3.0)}});
  EXPECT_NEAR(confidence_score(p), -2.0, 1e-12);
}

TEST(ConfidenceScore, PadIgnoredAfterEos) {
  std::vector<StepDistribution> steps;
  steps.push_back(step(U'a', 0.25));
  steps.push_back(StepDistribution({{kEos, 1.0}}));
  steps.push_back(StepDistribution({{kPad, 1.0}}));
  const Prediction p = Prediction::from_steps(std::move(steps));
  EXPECT_NEAR(confidence_score(p), std::log(0.25), 1e-12);
}

TEST(ConfidenceScore, EmptyWordScoresNegativeInfinity) {
  std::vector<StepDistribution> steps;
  steps.push_back(StepDistribution({{kEos, 1.0}}));
  const Prediction p = Prediction::from_steps(std::move(steps));
  EXPECT_TRUE(std::isinf(confidence_score(p)));
  EXPECT_LT(confidence_score(p), 0.0);
}

TEST(ConfidenceScore, ZeroProbabilityScoresNegativeInfinity) {
  const Prediction p = from_chars({{U'a', 0.0}});
  // argmax prob 0 -> -inf sentinel (not a crash)
  EXPECT_TRUE(std::isinf(confidence_score(p)));
}

TEST(ConfidenceScore, EqualsLogSequenceProbabilityOverLength) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<char32_t, double>> chars;
    const std::size_t len = 1 + rng() % 10;
    for (std::size_t i = 0; i < len; ++i) {
      const double p = std::exp(-(static_cast<double>(rng() % 1000) / 100.0));
      chars.push_back({static_cast<char32_t>(U'a' + rng() % 20), p});
    }
    const Prediction pred = from_chars(chars);
    EXPECT_NEAR(confidence_score(pred),
                std::log(sequence_probability(pred)) /
                    static_cast<double>(pred.length()),
                1e-12);
  }
}

TEST(ConfidenceScore, InvariantUnderStepRepetition) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<char32_t, double>> chars;
    const std::size_t len = 1 + rng() % 4;
    for (std::size_t i = 0; i < len; ++i) {
      const double p = 0.05 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
      chars.push_back({static_cast<char32_t>(U'a' + rng() % 5), p});
    }
    const std::size_t k = 2 + rng() % 4;
    std::vector<std::pair<char32_t, double>> repeated;
    for (std::size_t copy = 0; copy < k; ++copy) {
      repeated.insert(repeated.end(), chars.begin(), chars.end());
    }
    const double once = confidence_score(from_chars(chars));
    const double many = confidence_score(from_chars(repeated));
    EXPECT_NEAR(once, many, 1e-12);
    // Sequence probability decays geometrically under repetition.
    EXPECT_NEAR(sequence_probability(from_chars(repeated)),
                std::pow(sequence_probability(from_chars(chars)),
                         static_cast<double>(k)),
                1e-12);
  }
}

TEST(WordLevelEnsemble, PicksHigherScore) {
  const Prediction ca = from_chars({{U'a', 0.9}});   // score log 0.9
  const Prediction cf = from_chars({{U'b', 0.5}});   // score log 0.5
  const EnsembleDecision d = word_level_ensemble(ca, cf);
  EXPECT_EQ(d.chosen, ExpertKind::kContextAware);
  EXPECT_EQ(d.word, U"a");
  EXPECT_NEAR(d.score_ca, std::log(0.9), 1e-12);
  EXPECT_NEAR(d.score_cf, std::log(0.5), 1e-12);
}

TEST(WordLevelEnsemble, TieGoesToContextAware) {
  const Prediction ca = from_chars({{U'a', 0.7}});
  const Prediction cf = from_chars({{U'b', 0.7}});
  const EnsembleDecision d = word_level_ensemble(ca, cf);
  EXPECT_EQ(d.chosen, ExpertKind::kContextAware);
  EXPECT_EQ(d.word, U"a");
}

TEST(WordLevelEnsemble, EmptyExpertLoses) {
  std::vector<StepDistribution> empty_steps;
  empty_steps.push_back(StepDistribution({{kEos, 1.0}}));
  const Prediction empty = Prediction::from_steps(std::move(empty_steps));
  const Prediction cf = from_chars({{U'b', 0.1}});
  const EnsembleDecision d = word_level_ensemble(empty, cf);
  EXPECT_EQ(d.chosen, ExpertKind::kContextFree);
  EXPECT_EQ(d.word, U"b");
}

TEST(WordLevelEnsemble, BothEmptyIsAnError) {
  std::vector<StepDistribution> a;
  a.push_back(StepDistribution({{kEos, 1.0}}));
  std::vector<StepDistribution> b;
  b.push_back(StepDistribution({{kEos, 1.0}}));
  const Prediction pa = Prediction::from_steps(std::move(a));
  const Prediction pb = Prediction::from_steps(std::move(b));
  EXPECT_THROW(word_level_ensemble(pa, pb), Error);
}

TEST(WordLevelEnsemble, OutputIsAlwaysOneOfTheInputs) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const auto random_pred = [&]() {
      std::vector<std::pair<char32_t, double>> chars;
      const std::size_t len = 1 + rng() % 6;
      for (std::size_t i = 0; i < len; ++i) {
        chars.push_back({static_cast<char32_t>(U'a' + rng() % 6),
                         0.05 + 0.9 * (rng() % 100) / 100.0});
      }
      return from_chars(chars);
    };
    const Prediction ca = random_pred();
    const Prediction cf = random_pred();
    const EnsembleDecision d = word_level_ensemble(ca, cf);
    EXPECT_TRUE(d.word == ca.word || d.word == cf.word);
  }
}

TEST(WordLevelEnsemble, MonotoneInPerStepProbabilities) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<char32_t, double>> ca_chars;
    std::vector<std::pair<char32_t, double>> cf_chars;
    const std::size_t len = 1 + rng() % 5;
    for (std::size_t i = 0; i < len; ++i) {
      ca_chars.push_back({U'a', 0.1 + 0.5 * (rng() % 100) / 100.0});
      cf_chars.push_back({U'b', 0.1 + 0.5 * (rng() % 100) / 100.0});
    }
    const EnsembleDecision before =
        word_level_ensemble(from_chars(ca_chars), from_chars(cf_chars));
    if (before.chosen != ExpertKind::kContextAware) continue;
    // Raising every CA step probability must not flip the decision away.
    for (auto& [c, p] : ca_chars) p = std::min(1.0, p + 0.3);
    const EnsembleDecision after =
        word_level_ensemble(from_chars(ca_chars), from_chars(cf_chars));
    EXPECT_EQ(after.chosen, ExpertKind::kContextAware);
  }
}

TEST(CharLevelEnsemble, IdenticalPredictionsPassThrough) {
  const Prediction ca = from_chars({{U'a', 0.9}, {U'b', 0.8}});
  const Prediction cf = from_chars({{U'a', 0.7}, {U'b', 0.6}});
  EXPECT_EQ(char_level_ensemble(ca, cf), U"ab");
}

TEST(CharLevelEnsemble, PicksPerPositionMax) {
  // CA steps (0.9, 0.4) decoding "ab"; CF steps (0.6, 0.8) decoding "ac".
  const Prediction ca = from_chars({{U'a', 0.9}, {U'b', 0.4}});
  const Prediction cf = from_chars({{U'a', 0.6}, {U'c', 0.8}});
  EXPECT_EQ(char_level_ensemble(ca, cf), U"ac");
}

TEST(CharLevelEnsemble, MissingStepHasProbabilityZero) {
  // CA is two chars long, CF three; CF's third step (0.7) beats the
  // missing CA step.
  const Prediction ca = from_chars({{U'a', 0.9}, {U'b', 0.9}});
  const Prediction cf = from_chars({{U'a', 0.1}, {U'b', 0.1}, {U'd', 0.7}});
  EXPECT_EQ(char_level_ensemble(ca, cf), U"abd");
}

}  // namespace
}  // namespace chartail
