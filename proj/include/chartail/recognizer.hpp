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

#ifndef CHARTAIL_RECOGNIZER_HPP_
#define CHARTAIL_RECOGNIZER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chartail/charset.hpp"
#include "chartail/detail/rng.hpp"
#include "chartail/ensemble.hpp"
#include "chartail/error.hpp"

namespace chartail {

struct GlyphModelConfig {
  std::size_t dim = 16;
  double sigma = 0.30;                 // observation noise scale
  double confusable_fraction = 0.05;   // fraction of symbols in pairs
  double confusable_cos = 0.97;        // cosine within a confusable pair
  double max_other_cos = 0.85;         // separation bound for all others
};

/// Unit-vector glyph centroids over a charset, with a deterministic set
/// of visually confusable pairs. Pairs link a lower-index symbol with a
/// higher-index one; for generated corpora (symbol index = frequency
/// rank) that reproduces the head-character-confusable-with-tail failure
/// mode without touching the extreme head.
class GlyphModel {
 public:
  static GlyphModel make(const Charset& charset, const GlyphModelConfig& config,
                         std::uint64_t seed) {
    require(charset.size() >= 1, "glyph model needs a non-empty charset");
    require(config.dim >= 2, "glyph dimension must be at least 2");
    require(config.sigma > 0.0, "sigma must be positive");
    require(config.confusable_fraction >= 0.0 &&
                config.confusable_fraction < 1.0,
            "confusable_fraction must be in [0, 1)");
    require(config.confusable_cos >= 0.95 && config.confusable_cos < 1.0,
            "confusable_cos must be in [0.95, 1)");
    require(config.max_other_cos < 0.9, "max_other_cos must stay below 0.9");
    GlyphModel model;
    model.charset_ = charset;
    model.config_ = config;
    model.seed_ = seed;
    const std::size_t num_symbols = charset.size();
    model.pairs_ = plan_pairs(num_symbols, config.confusable_fraction);
    std::vector<int> partner(num_symbols, -1);
    for (const auto& [a, b] : model.pairs_) {
      partner[b] = a;
    }
    Rng rng(mix_seed(seed, 0xC3A7));
    model.centroids_.assign(num_symbols,
                            std::vector<double>(config.dim, 0.0));
    for (std::size_t cls = 0; cls < num_symbols; ++cls) {
      if (partner[cls] >= 0) {
        model.place_confusable(cls, static_cast<std::size_t>(partner[cls]),
                               rng);
      } else {
        model.place_free(cls, rng);
      }
    }
    return model;
  }

  const Charset& charset() const { return charset_; }
  std::size_t dim() const { return config_.dim; }
  double sigma() const { return config_.sigma; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::pair<int, int>>& confusable_pairs() const {
    return pairs_;
  }
  const std::vector<double>& centroid(std::size_t cls) const {
    CHARTAIL_CHECK(cls < centroids_.size());
    return centroids_[cls];
  }

  double cosine(std::size_t a, std::size_t b) const {
    double dot = 0.0;
    for (std::size_t i = 0; i < config_.dim; ++i) {
      dot += centroids_[a][i] * centroids_[b][i];
    }
    return dot;
  }

 private:
  // Deterministic pair plan: pair members sit in the 10-40% and 75-95%
  // index bands, skipping indices already used.
  static std::vector<std::pair<int, int>> plan_pairs(std::size_t num_symbols,
                                                     double fraction) {
    const std::size_t paired =
        static_cast<std::size_t>(num_symbols * fraction);
    const std::size_t n_pairs = paired / 2;
    std::vector<std::pair<int, int>> pairs;
    if (n_pairs == 0) return pairs;
    std::vector<bool> used(num_symbols, false);
    const auto take = [&](double position) -> int {
      std::size_t idx = static_cast<std::size_t>(
          position * static_cast<double>(num_symbols));
      idx = std::min(idx, num_symbols - 1);
      while (used[idx]) idx = (idx + 1) % num_symbols;
      used[idx] = true;
      return static_cast<int>(idx);
    };
    for (std::size_t i = 0; i < n_pairs; ++i) {
      const double t = n_pairs == 1
                           ? 0.5
                           : static_cast<double>(i) /
                                 static_cast<double>(n_pairs - 1);
      const int a = take(0.10 + 0.30 * t);
      const int b = take(0.75 + 0.20 * t);
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    return pairs;
  }

  void place_free(std::size_t cls, Rng& rng) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      std::vector<double> v = random_unit(rng);
      if (max_cos_against_built(v, cls, std::size_t(-1)) <
          config_.max_other_cos) {
        centroids_[cls] = std::move(v);
        return;
      }
    }
    fail("could not place glyph centroids; increase dim or lower "
         "max_other_cos");
  }

  void place_confusable(std::size_t cls, std::size_t partner, Rng& rng) {
    const std::vector<double>& anchor = centroids_[partner];
    const double cos_target = config_.confusable_cos;
    const double sin_target = std::sqrt(1.0 - cos_target * cos_target);
    for (int attempt = 0; attempt < 100000; ++attempt) {
      // Random unit direction orthogonal to the anchor.
      std::vector<double> u = random_unit(rng);
      double dot = 0.0;
      for (std::size_t i = 0; i < config_.dim; ++i) dot += u[i] * anchor[i];
      double norm_sq = 0.0;
      for (std::size_t i = 0; i < config_.dim; ++i) {
        u[i] -= dot * anchor[i];
        norm_sq += u[i] * u[i];
      }
      if (norm_sq <= 1e-12) continue;
      const double inv = 1.0 / std::sqrt(norm_sq);
      std::vector<double> v(config_.dim);
      for (std::size_t i = 0; i < config_.dim; ++i) {
        v[i] = cos_target * anchor[i] + sin_target * u[i] * inv;
      }
      if (max_cos_against_built(v, cls, partner) < config_.max_other_cos) {
        centroids_[cls] = std::move(v);
        return;
      }
    }
    fail("could not place confusable centroid; increase dim");
  }

  std::vector<double> random_unit(Rng& rng) const {
    std::vector<double> v(config_.dim);
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (double& x : v) {
        x = rng.next_gaussian();
        norm_sq += x * x;
      }
    } while (norm_sq <= 1e-12);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
  }

  // Maximum signed cosine of v against the centroids already placed,
  // skipping `self` and `skip`.
  double max_cos_against_built(const std::vector<double>& v, std::size_t self,
                               std::size_t skip) const {
    double worst = -1.0;
    for (std::size_t other = 0; other < self; ++other) {
      if (other == skip) continue;
      double dot = 0.0;
      for (std::size_t i = 0; i < config_.dim; ++i) {
        dot += v[i] * centroids_[other][i];
      }
      worst = std::max(worst, dot);
    }
    return worst;
  }

  Charset charset_;
  GlyphModelConfig config_;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<double>> centroids_;
  std::vector<std::pair<int, int>> pairs_;
};

/// Noisy glyph observations: centroid plus isotropic Gaussian noise.
/// Deterministic per (word, seed); distinct samples should pass distinct
/// seeds.
inline std::vector<std::vector<double>> render(std::u32string_view word,
                                               const GlyphModel& glyphs,
                                               std::uint64_t seed) {
  Rng rng(mix_seed(seed, hash_text(word)));
  std::vector<std::vector<double>> observations;
  observations.reserve(word.size());
  for (char32_t c : word) {
    const auto cls = glyphs.charset().index_of(c);
    if (!cls) {
      fail("render: character '", symbol_to_string(c),
           "' is not in the glyph charset");
    }
    std::vector<double> obs = glyphs.centroid(static_cast<std::size_t>(*cls));
    for (double& x : obs) x += glyphs.sigma() * rng.next_gaussian();
    observations.push_back(std::move(obs));
  }
  return observations;
}

/// Add-k smoothed bigram model over symbols with START/EOS boundaries.
/// Rows are conditionals P(next | prev); every entry is positive.
class BigramLM {
 public:
  static constexpr int kStart = -1;

  static BigramLM fit(std::span<const std::u32string> words,
                      const Charset& charset, double k) {
    require(!words.empty(), "BigramLM: empty training list");
    require(k > 0.0, "BigramLM: smoothing k must be positive");
    BigramLM lm;
    lm.num_symbols_ = charset.size();
    const std::size_t rows = lm.num_symbols_ + 1;  // prev: START + symbols
    const std::size_t cols = lm.num_symbols_ + 1;  // next: symbols + EOS
    std::vector<double> counts(rows * cols, 0.0);
    for (const std::u32string& word : words) {
      int prev = kStart;
      for (char32_t c : word) {
        const auto cls = charset.index_of(c);
        if (!cls) {
          fail("BigramLM: character '", symbol_to_string(c),
               "' is not in the charset");
        }
        ++counts[lm.cell(prev, *cls)];
        prev = *cls;
      }
      ++counts[lm.cell(prev, lm.eos_class())];
    }
    lm.log_table_.resize(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
      double row_total = 0.0;
      for (std::size_t c = 0; c < cols; ++c) row_total += counts[r * cols + c];
      const double denom = row_total + k * static_cast<double>(cols);
      for (std::size_t c = 0; c < cols; ++c) {
        lm.log_table_[r * cols + c] =
            std::log((counts[r * cols + c] + k) / denom);
      }
    }
    return lm;
  }

  std::size_t num_symbols() const { return num_symbols_; }
  int eos_class() const { return static_cast<int>(num_symbols_); }

  /// prev in {kStart, 0..K-1}; next in {0..K-1, eos_class()}.
  double log_prob(int prev, int next) const { return log_table_[cell(prev, next)]; }
  double prob(int prev, int next) const { return std::exp(log_prob(prev, next)); }

 private:
  std::size_t cell(int prev, int next) const {
    CHARTAIL_CHECK(prev >= kStart && prev < static_cast<int>(num_symbols_));
    CHARTAIL_CHECK(next >= 0 && next <= static_cast<int>(num_symbols_));
    const std::size_t row = static_cast<std::size_t>(prev + 1);
    return row * (num_symbols_ + 1) + static_cast<std::size_t>(next);
  }

  std::size_t num_symbols_ = 0;
  std::vector<double> log_table_;
};

/// A fitted expert: shared glyph space, a per-occurrence character prior,
/// and (for the context-aware kind only) a bigram language model trained
/// on its own word list.
struct ExpertModel {
  ExpertKind kind;
  GlyphModel glyphs;
  std::vector<double> prior;  // per symbol class
  std::optional<BigramLM> lm;
};

inline ExpertModel fit_expert(ExpertKind kind,
                              std::span<const std::u32string> train_words,
                              const GlyphModel& glyphs, double smoothing_k) {
  require(!train_words.empty(), "fit_expert: empty training list");
  const Charset& charset = glyphs.charset();
  std::vector<double> counts(charset.size(), 0.0);
  double total = 0.0;
  for (const std::u32string& word : train_words) {
    for (char32_t c : word) {
      const auto cls = charset.index_of(c);
      if (!cls) {
        fail("fit_expert: character '", symbol_to_string(c),
             "' is not in the charset");
      }
      counts[static_cast<std::size_t>(*cls)] += 1.0;
      total += 1.0;
    }
  }
  require(total > 0.0, "fit_expert: training words are all empty");
  ExpertModel model{kind, glyphs, std::move(counts), std::nullopt};
  for (double& p : model.prior) p /= total;
  if (kind == ExpertKind::kContextAware) {
    model.lm = BigramLM::fit(train_words, charset, smoothing_k);
  }
  return model;
}

namespace detail {

inline StepDistribution posterior_step(const ExpertModel& expert,
                                       const std::vector<double>& observation,
                                       int prev_class, int* argmax_class) {
  const Charset& charset = expert.glyphs.charset();
  const std::size_t num_symbols = charset.size();
  const double inv_two_sigma_sq =
      1.0 / (2.0 * expert.glyphs.sigma() * expert.glyphs.sigma());
  std::vector<double> log_post(num_symbols);
  double max_lp = -std::numeric_limits<double>::infinity();
  for (std::size_t cls = 0; cls < num_symbols; ++cls) {
    const std::vector<double>& centroid = expert.glyphs.centroid(cls);
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < observation.size(); ++i) {
      const double diff = observation[i] - centroid[i];
      dist_sq += diff * diff;
    }
    double lp = -dist_sq * inv_two_sigma_sq;
    if (expert.kind == ExpertKind::kContextAware) {
      lp += expert.lm->log_prob(prev_class, static_cast<int>(cls));
    } else {
      lp += std::log(expert.prior[cls]);  // zero prior gives -inf
    }
    log_post[cls] = lp;
    max_lp = std::max(max_lp, lp);
  }
  require(std::isfinite(max_lp), "decode: no symbol has positive posterior");
  std::vector<StepEntry> entries;
  entries.reserve(num_symbols);
  double total = 0.0;
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t cls = 0; cls < num_symbols; ++cls) {
    const double p = std::exp(log_post[cls] - max_lp);
    total += p;
    entries.push_back({charset.symbol(cls), p});
    if (p > best_p) {
      best_p = p;
      best = cls;
    }
  }
  for (StepEntry& e : entries) e.prob /= total;
  *argmax_class = static_cast<int>(best);
  return StepDistribution(std::move(entries));
}

}  // namespace detail

/// Greedy left-to-right decoding: one posterior step per observation plus
/// a terminal EOS step. The context-free posterior is likelihood times
/// the fitted prior; the context-aware posterior is likelihood times the
/// bigram conditional on the previously decoded character, which is
/// exactly the conditional factorization the confidence score assumes.
/// The terminal step carries P(EOS | last) for the context-aware expert
/// (remaining mass on PAD) and a fixed 1.0 for the context-free expert,
/// which has no length model.
inline Prediction decode(const ExpertModel& expert,
                         std::span<const std::vector<double>> observations,
                         std::size_t max_len = kDefaultMaxDecodeLen) {
  if (expert.kind == ExpertKind::kContextAware) {
    CHARTAIL_CHECK(expert.lm.has_value());
  }
  std::vector<StepDistribution> steps;
  steps.reserve(observations.size() + 1);
  int prev = BigramLM::kStart;
  for (const std::vector<double>& obs : observations) {
    require(obs.size() == expert.glyphs.dim(),
            "decode: observation dimension mismatch");
    int argmax = 0;
    steps.push_back(detail::posterior_step(expert, obs, prev, &argmax));
    prev = argmax;
  }
  if (expert.kind == ExpertKind::kContextAware) {
    const double p_eos = expert.lm->prob(prev, expert.lm->eos_class());
    steps.push_back(StepDistribution({{kEos, p_eos}, {kPad, 1.0 - p_eos}}));
  } else {
    steps.push_back(StepDistribution({{kEos, 1.0}}));
  }
  return Prediction::from_steps(std::move(steps), max_len);
}

}  // namespace chartail

#endif  // CHARTAIL_RECOGNIZER_HPP_
