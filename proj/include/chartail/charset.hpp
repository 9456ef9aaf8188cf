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

#ifndef CHARTAIL_CHARSET_HPP_
#define CHARTAIL_CHARSET_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chartail/detail/utf8.hpp"
#include "chartail/error.hpp"

namespace chartail {

// Reserved sentinels for the padding, end-of-sequence, and unknown
// symbols. They are Unicode noncharacters, so they can never collide
// with real charset symbols read from files.
inline constexpr char32_t kPad = U'﷐';
inline constexpr char32_t kEos = U'﷑';
inline constexpr char32_t kUnk = U'﷒';

inline bool is_special_symbol(char32_t c) {
  return c == kPad || c == kEos || c == kUnk;
}

/// Renders a symbol for messages and files; specials get named tokens.
inline std::string symbol_to_string(char32_t c) {
  switch (c) {
    case kPad:
      return "<pad>";
    case kEos:
      return "<eos>";
    case kUnk:
      return "<unk>";
    default:
      return encode_utf8(c);
  }
}

/// Parses a symbol token: a named special or exactly one Unicode scalar.
inline char32_t symbol_from_string(std::string_view token) {
  if (token == "<pad>") return kPad;
  if (token == "<eos>") return kEos;
  if (token == "<unk>") return kUnk;
  const std::u32string decoded = decode_utf8(token);
  require(decoded.size() == 1, "expected a single character, got \"", token,
          "\"");
  return decoded[0];
}

/// Ordered character inventory. The three reserved specials (PAD, EOS,
/// UNK) are implicit and disjoint from the symbols by construction.
class Charset {
 public:
  Charset() = default;

  explicit Charset(std::vector<char32_t> symbols) : symbols_(std::move(symbols)) {
    index_.reserve(symbols_.size() * 2);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const char32_t c = symbols_[i];
      require(is_unicode_scalar(c), "charset symbol is not a Unicode scalar");
      require(!is_special_symbol(c),
              "charset symbol collides with a reserved special");
      const bool inserted = index_.emplace(c, static_cast<int>(i)).second;
      require(inserted, "duplicate charset symbol '", symbol_to_string(c),
              "'");
    }
  }

  std::size_t size() const { return symbols_.size(); }
  static constexpr std::size_t num_specials() { return 3; }
  std::size_t num_classes() const { return symbols_.size() + num_specials(); }

  bool contains(char32_t c) const { return index_.find(c) != index_.end(); }

  std::optional<int> index_of(char32_t c) const {
    const auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  char32_t symbol(std::size_t cls) const {
    CHARTAIL_CHECK(cls < symbols_.size());
    return symbols_[cls];
  }

  const std::vector<char32_t>& symbols() const { return symbols_; }

  /// First symbol of `word` that is not in the charset, if any.
  std::optional<char32_t> first_foreign(std::u32string_view word) const {
    for (char32_t c : word) {
      if (!contains(c)) return c;
    }
    return std::nullopt;
  }

 private:
  std::vector<char32_t> symbols_;
  std::unordered_map<char32_t, int> index_;
};

enum class CountMode { kPerSample, kPerOccurrence };

inline std::string to_string(CountMode mode) {
  return mode == CountMode::kPerSample ? "per-sample" : "per-occurrence";
}

inline CountMode count_mode_from_string(std::string_view s) {
  if (s == "per-sample") return CountMode::kPerSample;
  if (s == "per-occurrence") return CountMode::kPerOccurrence;
  fail("unknown count mode \"", s, "\" (expected per-sample|per-occurrence)");
}

/// Per-character training-sample counts. In per-sample mode a word
/// contributes at most one count per distinct character; per-occurrence
/// counts repetitions. Per-sample is the default reading everywhere in
/// this toolkit.
class FrequencyTable {
 public:
  FrequencyTable(CountMode mode, std::int64_t total_samples,
                 std::map<char32_t, std::int64_t> counts)
      : mode_(mode), total_samples_(total_samples), counts_(std::move(counts)) {
    require(total_samples_ >= 0, "total_samples must be non-negative");
    for (const auto& [c, n] : counts_) {
      require(n >= 0, "negative count for '", symbol_to_string(c), "'");
      if (mode_ == CountMode::kPerSample) {
        require(n <= total_samples_, "per-sample count for '",
                symbol_to_string(c), "' exceeds total_samples");
      }
    }
  }

  CountMode mode() const { return mode_; }
  std::int64_t total_samples() const { return total_samples_; }
  const std::map<char32_t, std::int64_t>& counts() const { return counts_; }

  std::int64_t count(char32_t c) const {
    const auto it = counts_.find(c);
    return it == counts_.end() ? 0 : it->second;
  }

 private:
  CountMode mode_;
  std::int64_t total_samples_;
  std::map<char32_t, std::int64_t> counts_;
};

/// Counts training samples per character. Every charset symbol gets a row
/// (zero when unseen). Words with characters outside the charset are
/// rejected, naming the word and the character.
inline FrequencyTable build_frequency_table(
    std::span<const std::u32string> words, const Charset& charset,
    CountMode mode) {
  std::map<char32_t, std::int64_t> counts;
  for (char32_t c : charset.symbols()) counts.emplace(c, 0);
  std::unordered_set<char32_t> seen_in_word;
  for (const std::u32string& word : words) {
    if (const auto foreign = charset.first_foreign(word)) {
      fail("word \"", encode_utf8(word), "\" contains character '",
           symbol_to_string(*foreign), "' outside the charset");
    }
    if (mode == CountMode::kPerOccurrence) {
      for (char32_t c : word) ++counts[c];
    } else {
      seen_in_word.clear();
      for (char32_t c : word) {
        if (seen_in_word.insert(c).second) ++counts[c];
      }
    }
  }
  return FrequencyTable(mode, static_cast<std::int64_t>(words.size()),
                        std::move(counts));
}

/// Frequency buckets. The defaults (1500/100) follow the usual
/// many/medium/few cut for character-level long-tailed data.
struct CategoryThresholds {
  std::int64_t many_min = 1500;
  std::int64_t medium_min = 100;

  void validate() const {
    require(many_min > medium_min && medium_min > 0,
            "thresholds must satisfy many_min > medium_min > 0");
  }
};

enum class CharCategory { kFew = 0, kMedium = 1, kMany = 2 };

inline std::string to_string(CharCategory c) {
  switch (c) {
    case CharCategory::kFew:
      return "few";
    case CharCategory::kMedium:
      return "medium";
    default:
      return "many";
  }
}

inline CharCategory category_for_count(std::int64_t n,
                                       const CategoryThresholds& thresholds) {
  if (n >= thresholds.many_min) return CharCategory::kMany;
  if (n >= thresholds.medium_min) return CharCategory::kMedium;
  return CharCategory::kFew;
}

using CategoryMap = std::map<char32_t, CharCategory>;

/// Buckets every character of the table. Characters absent from the table
/// are Few with an implied count of zero; `category_of` below applies that
/// rule for lookups.
inline CategoryMap categorize(const FrequencyTable& table,
                              const CategoryThresholds& thresholds) {
  thresholds.validate();
  CategoryMap out;
  for (const auto& [c, n] : table.counts()) {
    out.emplace(c, category_for_count(n, thresholds));
  }
  return out;
}

inline CharCategory category_of(const CategoryMap& categories, char32_t c) {
  const auto it = categories.find(c);
  return it == categories.end() ? CharCategory::kFew : it->second;
}

}  // namespace chartail

#endif  // CHARTAIL_CHARSET_HPP_
