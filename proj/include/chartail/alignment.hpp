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

#ifndef CHARTAIL_ALIGNMENT_HPP_
#define CHARTAIL_ALIGNMENT_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chartail/error.hpp"

namespace chartail {

enum class StepKind : std::uint8_t { kMatch, kSubstitute, kDelete, kInsert };

struct AlignmentStep {
  StepKind kind;
  char32_t gt = U'\0';    // set for Match/Substitute/Delete
  char32_t pred = U'\0';  // set for Match/Substitute/Insert
};

/// Edit script between a ground-truth and a predicted string under unit
/// costs (match 0; substitute/delete/insert 1).
struct Alignment {
  std::vector<AlignmentStep> steps;
  std::int64_t cost = 0;

  std::u32string gt_projection() const {
    std::u32string out;
    for (const AlignmentStep& s : steps) {
      if (s.kind != StepKind::kInsert) out.push_back(s.gt);
    }
    return out;
  }

  std::u32string pred_projection() const {
    std::u32string out;
    for (const AlignmentStep& s : steps) {
      if (s.kind != StepKind::kDelete) out.push_back(s.pred);
    }
    return out;
  }
};

/// Levenshtein distance in O(min(|a|,|b|)) working space.
inline std::int64_t levenshtein_distance(std::u32string_view a,
                                         std::u32string_view b) {
  if (b.size() > a.size()) std::swap(a, b);  // row over the shorter string
  const std::size_t n = b.size();
  std::vector<std::int64_t> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::int64_t diag = row[0];
    row[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t sub = diag + (a[i - 1] != b[j - 1] ? 1 : 0);
      const std::int64_t del = row[j] + 1;
      const std::int64_t ins = row[j - 1] + 1;
      diag = row[j];
      row[j] = std::min({sub, del, ins});
    }
  }
  return row[n];
}

namespace detail {

// row[j] = cost of aligning all of `gt` against pred[0..j).
inline void nw_forward_row(std::u32string_view gt, std::u32string_view pred,
                           std::vector<std::int64_t>& row) {
  const std::size_t n = pred.size();
  row.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) row[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= gt.size(); ++i) {
    std::int64_t diag = row[0];
    row[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t sub = diag + (gt[i - 1] != pred[j - 1] ? 1 : 0);
      diag = row[j];
      row[j] = std::min({sub, row[j] + 1, row[j - 1] + 1});
    }
  }
}

// row[j] = cost of aligning all of `gt` against pred[j..n).
inline void nw_backward_row(std::u32string_view gt, std::u32string_view pred,
                            std::vector<std::int64_t>& row) {
  const std::size_t n = pred.size();
  row.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    row[j] = static_cast<std::int64_t>(n - j);
  }
  for (std::size_t ii = gt.size(); ii-- > 0;) {
    std::int64_t diag = row[n];
    row[n] = static_cast<std::int64_t>(gt.size() - ii);
    for (std::size_t j = n; j-- > 0;) {
      const std::int64_t sub = diag + (gt[ii] != pred[j] ? 1 : 0);
      diag = row[j];
      row[j] = std::min({sub, row[j] + 1, row[j + 1] + 1});
    }
  }
}

// Full-table alignment with deterministic tie-breaking, used for the
// recursion base cases where one side has at most one character (the
// table is then linear in the other side's length).
inline void align_full_dp(std::u32string_view gt, std::u32string_view pred,
                          std::vector<AlignmentStep>& out) {
  const std::size_t m = gt.size();
  const std::size_t n = pred.size();
  std::vector<std::int64_t> table((m + 1) * (n + 1));
  const auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& {
    return table[i * (n + 1) + j];
  };
  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t sub =
          at(i - 1, j - 1) + (gt[i - 1] != pred[j - 1] ? 1 : 0);
      at(i, j) = std::min({sub, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  // Traceback preference on ties: Match > Substitute > Delete > Insert.
  std::size_t i = m;
  std::size_t j = n;
  std::vector<AlignmentStep> rev;
  rev.reserve(m + n);
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && gt[i - 1] == pred[j - 1] &&
        at(i, j) == at(i - 1, j - 1)) {
      rev.push_back({StepKind::kMatch, gt[i - 1], pred[j - 1]});
      --i;
      --j;
    } else if (i > 0 && j > 0 && gt[i - 1] != pred[j - 1] &&
               at(i, j) == at(i - 1, j - 1) + 1) {
      rev.push_back({StepKind::kSubstitute, gt[i - 1], pred[j - 1]});
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      rev.push_back({StepKind::kDelete, gt[i - 1], U'\0'});
      --i;
    } else {
      rev.push_back({StepKind::kInsert, U'\0', pred[j - 1]});
      --j;
    }
  }
  out.insert(out.end(), rev.rbegin(), rev.rend());
}

inline void hirschberg(std::u32string_view gt, std::u32string_view pred,
                       std::vector<AlignmentStep>& out) {
  if (gt.size() <= 1 || pred.size() <= 1) {
    align_full_dp(gt, pred, out);
    return;
  }
  const std::size_t mid = gt.size() / 2;
  std::vector<std::int64_t> forward;
  std::vector<std::int64_t> backward;
  nw_forward_row(gt.substr(0, mid), pred, forward);
  nw_backward_row(gt.substr(mid), pred, backward);
  std::size_t split = 0;
  std::int64_t best = forward[0] + backward[0];
  for (std::size_t j = 1; j <= pred.size(); ++j) {
    const std::int64_t total = forward[j] + backward[j];
    if (total < best) {
      best = total;
      split = j;
    }
  }
  hirschberg(gt.substr(0, mid), pred.substr(0, split), out);
  hirschberg(gt.substr(mid), pred.substr(split), out);
}

}  // namespace detail

/// Optimal edit-script alignment in linear space (Hirschberg's
/// divide-and-conquer over forward/backward score rows). Deterministic:
/// split points take the smallest optimal index and base-case tracebacks
/// prefer Match > Substitute > Delete > Insert.
inline Alignment align(std::u32string_view gt, std::u32string_view pred) {
  Alignment result;
  result.steps.reserve(std::max(gt.size(), pred.size()));
  detail::hirschberg(gt, pred, result.steps);
  for (const AlignmentStep& s : result.steps) {
    if (s.kind != StepKind::kMatch) ++result.cost;
  }
  return result;
}

}  // namespace chartail

#endif  // CHARTAIL_ALIGNMENT_HPP_
