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

#ifndef CHARTAIL_METRICS_HPP_
#define CHARTAIL_METRICS_HPP_

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chartail/alignment.hpp"
#include "chartail/charset.hpp"
#include "chartail/error.hpp"

namespace chartail {

struct TallyCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// Per-character confusion tally accumulated from alignments:
/// Match(c) -> tp[c]; Substitute(g,p) -> fn[g] and fp[p]; Delete(g) ->
/// fn[g]; Insert(p) -> fp[p]. Tallies merge element-wise, so evaluation
/// can proceed per sample in any order.
class CharTally {
 public:
  /// When a charset is given, characters outside it are folded into the
  /// UNK sentinel so they never pollute a real character's counts.
  void add(const Alignment& alignment, const Charset* charset = nullptr) {
    const auto key = [&](char32_t c) -> char32_t {
      if (charset != nullptr && !charset->contains(c)) return kUnk;
      return c;
    };
    for (const AlignmentStep& s : alignment.steps) {
      switch (s.kind) {
        case StepKind::kMatch:
          ++counts_[key(s.gt)].tp;
          break;
        case StepKind::kSubstitute:
          ++counts_[key(s.gt)].fn;
          ++counts_[key(s.pred)].fp;
          break;
        case StepKind::kDelete:
          ++counts_[key(s.gt)].fn;
          break;
        case StepKind::kInsert:
          ++counts_[key(s.pred)].fp;
          break;
      }
    }
  }

  void merge(const CharTally& other) {
    for (const auto& [c, t] : other.counts_) {
      TallyCounts& mine = counts_[c];
      mine.tp += t.tp;
      mine.fp += t.fp;
      mine.fn += t.fn;
    }
  }

  const std::map<char32_t, TallyCounts>& counts() const { return counts_; }

  TallyCounts at(char32_t c) const {
    const auto it = counts_.find(c);
    return it == counts_.end() ? TallyCounts{} : it->second;
  }

 private:
  std::map<char32_t, TallyCounts> counts_;
};

inline CharTally tally(std::span<const Alignment> alignments,
                       const Charset* charset = nullptr) {
  CharTally out;
  for (const Alignment& a : alignments) out.add(a, charset);
  return out;
}

/// Per-character F1 plus category-averaged scores. Characters with no
/// activity (tp+fp+fn = 0) are excluded from every average so that
/// evaluating a subset of the charset does not deflate the means; UNK is
/// reported but never averaged.
struct CharF1Report {
  struct Row {
    char32_t symbol;
    std::optional<CharCategory> category;  // empty for UNK
    TallyCounts tally;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;  // ground-truth occurrences: tp + fn
    bool included = false;     // participates in averages
  };

  std::vector<Row> rows;  // sorted by symbol
  // Index by CharCategory; categories with no included character are nan.
  std::array<double, 3> category_f1{};
  std::array<std::int64_t, 3> category_char_count{};
  double macro_f1 = 0.0;

  double f1_of(CharCategory c) const {
    return category_f1[static_cast<std::size_t>(c)];
  }
};

inline CharF1Report char_f1(const CharTally& tally,
                            const CategoryMap& categories) {
  CharF1Report report;
  report.category_f1 = {0.0, 0.0, 0.0};
  report.category_char_count = {0, 0, 0};
  std::array<double, 3> sums{0.0, 0.0, 0.0};
  double macro_sum = 0.0;
  std::int64_t macro_count = 0;
  for (const auto& [c, t] : tally.counts()) {
    CharF1Report::Row row;
    row.symbol = c;
    row.tally = t;
    row.support = t.tp + t.fn;
    const std::int64_t activity = t.tp + t.fp + t.fn;
    row.included = activity > 0 && c != kUnk;
    if (t.tp + t.fp > 0) {
      row.precision = static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fp);
    }
    if (t.tp + t.fn > 0) {
      row.recall = static_cast<double>(t.tp) / static_cast<double>(t.tp + t.fn);
    }
    if (row.precision + row.recall > 0.0) {
      row.f1 = 2.0 * row.precision * row.recall / (row.precision + row.recall);
    }
    if (c != kUnk) {
      row.category = category_of(categories, c);
    }
    if (row.included) {
      const auto cat = static_cast<std::size_t>(*row.category);
      sums[cat] += row.f1;
      ++report.category_char_count[cat];
      macro_sum += row.f1;
      ++macro_count;
    }
    report.rows.push_back(row);
  }
  for (std::size_t cat = 0; cat < 3; ++cat) {
    report.category_f1[cat] =
        report.category_char_count[cat] > 0
            ? sums[cat] / static_cast<double>(report.category_char_count[cat])
            : std::numeric_limits<double>::quiet_NaN();
  }
  report.macro_f1 = macro_count > 0
                        ? macro_sum / static_cast<double>(macro_count)
                        : std::numeric_limits<double>::quiet_NaN();
  return report;
}

inline CharF1Report char_f1(const CharTally& tally,
                            const FrequencyTable& train_table,
                            const CategoryThresholds& thresholds) {
  return char_f1(tally, categorize(train_table, thresholds));
}

/// Fraction of samples whose prediction equals the ground truth exactly.
inline double word_accuracy(std::span<const std::u32string> gts,
                            std::span<const std::u32string> preds) {
  require(gts.size() == preds.size(), "word_accuracy: got ", gts.size(),
          " ground-truth words but ", preds.size(), " predictions");
  require(!gts.empty(), "word_accuracy: empty corpus");
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    if (gts[i] == preds[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gts.size());
}

}  // namespace chartail

#endif  // CHARTAIL_METRICS_HPP_
