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

#ifndef CHARTAIL_ENSEMBLE_HPP_
#define CHARTAIL_ENSEMBLE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "chartail/charset.hpp"
#include "chartail/error.hpp"

namespace chartail {

inline constexpr std::size_t kDefaultMaxDecodeLen = 25;

// Probabilities below this clamp the confidence score to -inf.
inline constexpr double kMinScorableProb = 1e-300;

struct StepEntry {
  char32_t symbol;  // charset symbol, kEos, or kPad
  double prob;
};

/// One decoding step's distribution over charset symbols plus EOS/PAD.
/// Entries may list only the top-k symbols; anything unlisted has
/// probability zero, which is enough because only the maximum matters
/// for sequence probability and the confidence score.
class StepDistribution {
 public:
  StepDistribution() = default;

  explicit StepDistribution(std::vector<StepEntry> entries)
      : entries_(std::move(entries)) {
    require(!entries_.empty(), "step distribution has no entries");
    for (const StepEntry& e : entries_) {
      require(e.prob >= 0.0 && std::isfinite(e.prob),
              "step probability must be finite and non-negative");
    }
  }

  const std::vector<StepEntry>& entries() const { return entries_; }

  /// Highest-probability entry; ties keep the earliest entry, which is
  /// the lowest class index for densely emitted distributions.
  const StepEntry& top() const {
    CHARTAIL_CHECK(!entries_.empty());
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      if (entries_[i].prob > entries_[best].prob) best = i;
    }
    return entries_[best];
  }

  double prob_of(char32_t symbol) const {
    for (const StepEntry& e : entries_) {
      if (e.symbol == symbol) return e.prob;
    }
    return 0.0;
  }

  double sum() const {
    double total = 0.0;
    for (const StepEntry& e : entries_) total += e.prob;
    return total;
  }

  /// Full distributions (as emitted by the recognizer) must sum to one.
  void validate_distribution(double tolerance = 1e-9) const {
    const double total = sum();
    require(std::abs(total - 1.0) <= tolerance,
            "step distribution sums to ", total, ", expected 1");
  }

 private:
  std::vector<StepEntry> entries_;
};

/// A decoded word plus its per-step distributions. `word` holds the
/// argmax characters strictly before the first EOS; PAD steps are
/// ignored. `word_probs[t]` is the maximum softmax probability at the
/// step that produced word[t].
struct Prediction {
  std::vector<StepDistribution> steps;
  std::u32string decoded;            // per-step argmax, sentinels included
  std::u32string word;
  std::vector<double> word_probs;

  std::size_t length() const { return word.size(); }

  static Prediction from_steps(std::vector<StepDistribution> steps,
                               std::size_t max_len = kDefaultMaxDecodeLen) {
    Prediction p;
    p.steps = std::move(steps);
    bool saw_eos = false;
    for (const StepDistribution& step : p.steps) {
      const StepEntry& best = step.top();
      p.decoded.push_back(best.symbol);
      if (saw_eos) continue;
      if (best.symbol == kEos) {
        saw_eos = true;
        continue;
      }
      if (best.symbol == kPad) continue;
      p.word.push_back(best.symbol);
      p.word_probs.push_back(best.prob);
    }
    require(p.word.size() <= max_len, "predicted word of length ",
            p.word.size(), " exceeds the maximum decode length ", max_len);
    return p;
  }
};

/// p(word) = product of per-step maximum probabilities over the steps
/// before EOS.
inline double sequence_probability(const Prediction& pred) {
  require(pred.length() >= 1, "empty prediction");
  double product = 1.0;
  for (double p : pred.word_probs) product *= p;
  return product;
}

/// Length-normalized confidence: mean log maximum probability over the
/// steps before EOS. Empty words score -inf so they always lose the
/// ensemble instead of crashing it; so does any step probability that is
/// numerically zero.
inline double confidence_score(const Prediction& pred) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (pred.length() == 0) return kNegInf;
  double total = 0.0;
  for (double p : pred.word_probs) {
    if (p < kMinScorableProb) return kNegInf;
    total += std::log(p);
  }
  return total / static_cast<double>(pred.length());
}

enum class ExpertKind { kContextAware, kContextFree };

inline std::string to_string(ExpertKind kind) {
  return kind == ExpertKind::kContextAware ? "context_aware" : "context_free";
}

struct EnsembleDecision {
  ExpertKind chosen;
  std::u32string word;
  double score_ca;
  double score_cf;
};

/// Returns the higher-confidence expert's word; exact ties go to the
/// context-aware expert.
inline EnsembleDecision word_level_ensemble(const Prediction& ca,
                                            const Prediction& cf) {
  EnsembleDecision decision;
  decision.score_ca = confidence_score(ca);
  decision.score_cf = confidence_score(cf);
  require(!(std::isinf(decision.score_ca) && std::isinf(decision.score_cf) &&
            decision.score_ca < 0 && decision.score_cf < 0),
          "no confident expert");
  if (decision.score_ca >= decision.score_cf) {
    decision.chosen = ExpertKind::kContextAware;
    decision.word = ca.word;
  } else {
    decision.chosen = ExpertKind::kContextFree;
    decision.word = cf.word;
  }
  return decision;
}

/// Character-level fusion: at each position take the character from the
/// expert with the higher maximum probability, treating a missing step
/// (expert already past EOS) as probability zero. Ties go to the
/// context-aware expert.
inline std::u32string char_level_ensemble(const Prediction& ca,
                                          const Prediction& cf) {
  const std::size_t len = std::max(ca.length(), cf.length());
  std::u32string out;
  out.reserve(len);
  for (std::size_t t = 0; t < len; ++t) {
    const double p_ca = t < ca.length() ? ca.word_probs[t] : 0.0;
    const double p_cf = t < cf.length() ? cf.word_probs[t] : 0.0;
    if (p_ca >= p_cf && t < ca.length()) {
      out.push_back(ca.word[t]);
    } else {
      out.push_back(cf.word[t]);
    }
  }
  return out;
}

}  // namespace chartail

#endif  // CHARTAIL_ENSEMBLE_HPP_
