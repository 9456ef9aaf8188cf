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

#ifndef CHARTAIL_SYNTH_HPP_
#define CHARTAIL_SYNTH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chartail/charset.hpp"
#include "chartail/detail/rng.hpp"
#include "chartail/detail/utf8.hpp"
#include "chartail/error.hpp"

namespace chartail {

inline constexpr std::size_t kDefaultMaxWordLen = 25;

/// A weighted word list. Weights are sampling frequencies: integer counts
/// for tokenized text, real weights for generated corpora.
struct Corpus {
  struct Entry {
    std::u32string word;
    double weight;
  };
  std::vector<Entry> entries;

  double total_weight() const {
    double total = 0.0;
    for (const Entry& e : entries) total += e.weight;
    return total;
  }
};

namespace detail {

inline bool is_token_delimiter(char32_t c) {
  if (c > 0x7F) return false;
  const char ch = static_cast<char>(c);
  return (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\v' ||
          ch == '\f') ||
         (ch >= '!' && ch <= '/') || (ch >= ':' && ch <= '@') ||
         (ch >= '[' && ch <= '`') || (ch >= '{' && ch <= '~');
}

}  // namespace detail

/// Splits text on whitespace and ASCII punctuation, drops tokens longer
/// than max_len, strips characters outside the charset, and aggregates
/// duplicate words into frequencies. Word order is canonical: descending
/// count, then lexicographic.
inline Corpus tokenize_corpus(std::string_view text, const Charset& charset,
                              std::size_t max_len = kDefaultMaxWordLen) {
  require(max_len >= 1, "max_len must be at least 1");
  const std::u32string decoded = decode_utf8(text);
  std::unordered_map<std::u32string, std::int64_t> counts;
  std::u32string token;
  const auto flush = [&]() {
    if (token.empty()) return;
    if (token.size() <= max_len) {
      std::u32string kept;
      for (char32_t c : token) {
        if (charset.contains(c)) kept.push_back(c);
      }
      if (!kept.empty()) ++counts[kept];
    }
    token.clear();
  };
  for (char32_t c : decoded) {
    if (detail::is_token_delimiter(c)) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  require(!counts.empty(), "tokenization produced an empty corpus");
  Corpus corpus;
  corpus.entries.reserve(counts.size());
  for (auto& [word, count] : counts) {
    corpus.entries.push_back({word, static_cast<double>(count)});
  }
  std::sort(corpus.entries.begin(), corpus.entries.end(),
            [](const Corpus::Entry& a, const Corpus::Entry& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.word < b.word;
            });
  return corpus;
}

/// Frequency-proportional sampling with replacement: the word-level
/// long-tailed set.
inline std::vector<std::u32string> sample_wiki(const Corpus& corpus,
                                               std::size_t n,
                                               std::uint64_t seed) {
  require(!corpus.entries.empty(), "sample_wiki: empty corpus");
  std::vector<double> weights;
  weights.reserve(corpus.entries.size());
  for (const Corpus::Entry& e : corpus.entries) weights.push_back(e.weight);
  const DiscreteSampler sampler(weights);
  Rng rng(seed);
  std::vector<std::u32string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(corpus.entries[sampler.sample(rng)].word);
  }
  return out;
}

/// Word-length distribution for the balanced sampler. The default is the
/// corpus's frequency-weighted empirical length distribution, so the
/// balanced set differs from the long-tailed set only in character
/// composition.
class LengthModel {
 public:
  static LengthModel fixed(std::size_t len) {
    require(len >= 1, "fixed length must be at least 1");
    LengthModel m;
    m.lengths_ = {len};
    m.weights_ = {1.0};
    return m;
  }

  static LengthModel empirical(const Corpus& corpus) {
    require(!corpus.entries.empty(), "LengthModel: empty corpus");
    std::map<std::size_t, double> by_length;
    for (const Corpus::Entry& e : corpus.entries) {
      by_length[e.word.size()] += e.weight;
    }
    LengthModel m;
    for (const auto& [len, weight] : by_length) {
      m.lengths_.push_back(len);
      m.weights_.push_back(weight);
    }
    return m;
  }

  std::size_t sample(Rng& rng) const {
    if (lengths_.size() == 1) return lengths_[0];
    const DiscreteSampler sampler(weights_);
    return lengths_[sampler.sample(rng)];
  }

  /// Draws n lengths with one shared sampler (cheaper than re-building
  /// the cumulative table per draw).
  std::vector<std::size_t> sample_many(std::size_t n, Rng& rng) const {
    std::vector<std::size_t> out;
    out.reserve(n);
    const DiscreteSampler sampler(weights_);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(lengths_[sampler.sample(rng)]);
    }
    return out;
  }

 private:
  std::vector<std::size_t> lengths_;
  std::vector<double> weights_;
};

/// Uniform character sampling: the character-level balanced set.
inline std::vector<std::u32string> sample_random(const Charset& charset,
                                                 std::size_t n,
                                                 const LengthModel& lengths,
                                                 std::uint64_t seed) {
  require(charset.size() > 0, "sample_random: empty charset");
  Rng rng(seed);
  const std::vector<std::size_t> lens = lengths.sample_many(n, rng);
  std::vector<std::u32string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::u32string word;
    word.reserve(lens[i]);
    for (std::size_t j = 0; j < lens[i]; ++j) {
      word.push_back(charset.symbol(rng.next_index(charset.size())));
    }
    out.push_back(std::move(word));
  }
  return out;
}

enum class WordOrigin { kWiki, kRandom };

inline std::string to_string(WordOrigin origin) {
  return origin == WordOrigin::kWiki ? "wiki" : "random";
}

inline WordOrigin word_origin_from_string(std::string_view s) {
  if (s == "wiki") return WordOrigin::kWiki;
  if (s == "random") return WordOrigin::kRandom;
  fail("unknown word origin \"", s, "\" (expected wiki|random)");
}

struct TaggedWord {
  std::u32string word;
  WordOrigin origin;
};

/// Half long-tailed, half balanced: ceil(n/2) frequency-sampled words
/// plus floor(n/2) random words, deterministically shuffled together.
inline std::vector<TaggedWord> sample_combined(const Corpus& corpus,
                                               const Charset& charset,
                                               std::size_t n,
                                               std::uint64_t seed) {
  require(n >= 2, "sample_combined: need n >= 2");
  const std::size_t n_wiki = (n + 1) / 2;
  const std::size_t n_random = n / 2;
  const std::vector<std::u32string> wiki =
      sample_wiki(corpus, n_wiki, mix_seed(seed, 1));
  const std::vector<std::u32string> random =
      sample_random(charset, n_random, LengthModel::empirical(corpus),
                    mix_seed(seed, 2));
  std::vector<TaggedWord> out;
  out.reserve(n);
  for (const std::u32string& w : wiki) out.push_back({w, WordOrigin::kWiki});
  for (const std::u32string& w : random) {
    out.push_back({w, WordOrigin::kRandom});
  }
  Rng rng(mix_seed(seed, 3));
  rng.shuffle(out);
  return out;
}

/// Frequency tables in both counting modes plus category composition of
/// the charset, for distribution plots.
struct DistributionStats {
  FrequencyTable per_sample;
  FrequencyTable per_occurrence;
  CategoryMap categories;  // from the per-sample table (the default mode)
  std::array<std::int64_t, 3> category_char_count{};
  std::array<double, 3> category_proportion{};

  std::int64_t chars_in(CharCategory c) const {
    return category_char_count[static_cast<std::size_t>(c)];
  }
  double proportion_of(CharCategory c) const {
    return category_proportion[static_cast<std::size_t>(c)];
  }
};

inline DistributionStats distribution_stats(
    std::span<const std::u32string> words, const Charset& charset,
    const CategoryThresholds& thresholds = {}) {
  require(!words.empty(), "distribution_stats: empty word list");
  DistributionStats stats{
      build_frequency_table(words, charset, CountMode::kPerSample),
      build_frequency_table(words, charset, CountMode::kPerOccurrence),
      {},
      {},
      {}};
  stats.categories = categorize(stats.per_sample, thresholds);
  for (const auto& [c, cat] : stats.categories) {
    ++stats.category_char_count[static_cast<std::size_t>(cat)];
  }
  const double total = static_cast<double>(charset.size());
  for (std::size_t i = 0; i < 3; ++i) {
    stats.category_proportion[i] =
        total > 0 ? static_cast<double>(stats.category_char_count[i]) / total
                  : 0.0;
  }
  return stats;
}

/// Parameters of the generated reference corpus: Zipf word frequencies
/// over a large vocabulary, Zipf-Mandelbrot character composition. The
/// defaults populate all three frequency categories at 50k training
/// samples over a 200-symbol charset.
struct ZipfCorpusConfig {
  std::size_t vocab_size = 100000;
  double word_exponent = 1.0;   // Zipf exponent over word ranks
  double char_exponent = 2.5;   // Zipf-Mandelbrot exponent over symbols
  double char_shift = 15.0;     // Zipf-Mandelbrot shift
  double mean_word_len = 5.5;
  std::size_t max_len = kDefaultMaxWordLen;
};

/// Generates a vocabulary of distinct words with Zipf(word_exponent)
/// frequencies by generation rank; characters are drawn i.i.d. from a
/// Zipf-Mandelbrot distribution over the charset order, so low-index
/// symbols are head characters and high-index symbols are tail.
inline Corpus make_zipf_corpus(const Charset& charset,
                               const ZipfCorpusConfig& config,
                               std::uint64_t seed) {
  require(charset.size() > 0, "make_zipf_corpus: empty charset");
  require(config.vocab_size >= 1, "make_zipf_corpus: vocab_size must be >= 1");
  require(config.max_len >= 1, "make_zipf_corpus: max_len must be >= 1");
  require(config.mean_word_len >= 1.0,
          "make_zipf_corpus: mean_word_len must be >= 1");
  std::vector<double> char_weights(charset.size());
  for (std::size_t i = 0; i < charset.size(); ++i) {
    char_weights[i] = 1.0 / std::pow(static_cast<double>(i + 1) +
                                         config.char_shift,
                                     config.char_exponent);
  }
  const DiscreteSampler char_sampler(char_weights);
  Rng rng(seed);
  std::unordered_set<std::u32string> seen;
  Corpus corpus;
  corpus.entries.reserve(config.vocab_size);
  while (corpus.entries.size() < config.vocab_size) {
    const std::size_t len = std::min(
        config.max_len, 1 + rng.next_poisson(config.mean_word_len - 1.0));
    std::u32string word;
    word.reserve(len);
    for (std::size_t j = 0; j < len; ++j) {
      word.push_back(charset.symbol(char_sampler.sample(rng)));
    }
    if (!seen.insert(word).second) continue;
    const double rank = static_cast<double>(corpus.entries.size() + 1);
    corpus.entries.push_back(
        {std::move(word), 1.0 / std::pow(rank, config.word_exponent)});
  }
  return corpus;
}

}  // namespace chartail

#endif  // CHARTAIL_SYNTH_HPP_
