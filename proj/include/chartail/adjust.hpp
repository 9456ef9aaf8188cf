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

#ifndef CHARTAIL_ADJUST_HPP_
#define CHARTAIL_ADJUST_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chartail/ensemble.hpp"
#include "chartail/error.hpp"

namespace chartail {

inline void validate_logits(std::span<const double> logits) {
  require(!logits.empty(), "empty logit vector");
  for (double v : logits) {
    require(std::isfinite(v), "logits must be finite");
  }
}

/// A class prior: non-negative, sums to one within 1e-9.
inline void validate_prior(std::span<const double> prior,
                           std::string_view name) {
  require(!prior.empty(), name, " is empty");
  double total = 0.0;
  for (double p : prior) {
    require(p >= 0.0 && std::isfinite(p), name,
            " entries must be finite and non-negative");
    total += p;
  }
  require(std::abs(total - 1.0) <= 1e-9, name, " sums to ", total,
          ", expected 1");
}

/// Numerically stable softmax; -inf entries get probability zero.
inline std::vector<double> softmax(std::span<const double> logits) {
  require(!logits.empty(), "softmax of an empty vector");
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double v : logits) max_logit = std::max(max_logit, v);
  require(std::isfinite(max_logit), "softmax has no finite logit");
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

/// Per-word training loss: mean negative log probability of each ground
/// truth character, plus the EOS step, averaged over |gt|+1 terms so
/// padding never dilutes the loss. A zero-probability character yields
/// +inf (reported, not clamped).
inline double word_nll(std::span<const StepDistribution> steps,
                       std::u32string_view gt) {
  require(steps.size() >= gt.size(), "word_nll: ", steps.size(),
          " steps cannot cover a ", gt.size(), "-character word");
  double total = 0.0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    total += -std::log(steps[t].prob_of(gt[t]));
  }
  if (steps.size() > gt.size()) {
    total += -std::log(steps[gt.size()].prob_of(kEos));
  }
  return total / static_cast<double>(gt.size() + 1);
}

/// Focal loss -(1-p)^gamma * log(p); gamma = 0 reduces to cross-entropy.
inline double focal_loss(double p, double gamma) {
  require(p > 0.0 && p <= 1.0, "focal_loss: p must be in (0, 1], got ", p);
  require(gamma >= 0.0 && std::isfinite(gamma),
          "focal_loss: gamma must be non-negative");
  const double value = -std::pow(1.0 - p, gamma) * std::log(p);
  return value == 0.0 ? 0.0 : value;
}

/// Classifier weight vectors, one per class, all of equal dimension.
using ClassifierWeights = std::vector<std::vector<double>>;

/// Rescales each class vector by its Euclidean norm to the -tau power;
/// tau = 0 returns the weights unchanged.
inline ClassifierWeights tau_normalize(const ClassifierWeights& weights,
                                       double tau) {
  require(!weights.empty(), "tau_normalize: no classes");
  require(std::isfinite(tau), "tau_normalize: tau must be finite");
  const std::size_t dim = weights.front().size();
  for (const auto& w : weights) {
    require(w.size() == dim, "tau_normalize: inconsistent dimensions");
    for (double v : w) require(std::isfinite(v), "weights must be finite");
  }
  if (tau == 0.0) return weights;
  ClassifierWeights out = weights;
  for (std::size_t cls = 0; cls < out.size(); ++cls) {
    double sq = 0.0;
    for (double v : out[cls]) sq += v * v;
    const double norm = std::sqrt(sq);
    require(norm > 0.0, "tau_normalize: class ", cls,
            " has a zero-norm weight vector");
    const double divisor = std::pow(norm, tau);
    for (double& v : out[cls]) v /= divisor;
  }
  return out;
}

/// Post-compensation softmax: softmax(logit - log p_source + log p_target).
/// With equal priors the adjustment cancels and this is plain softmax.
inline std::vector<double> pc_softmax(std::span<const double> logits,
                                      std::span<const double> source_prior,
                                      std::span<const double> target_prior) {
  validate_logits(logits);
  validate_prior(source_prior, "source prior");
  validate_prior(target_prior, "target prior");
  require(logits.size() == source_prior.size() &&
              logits.size() == target_prior.size(),
          "pc_softmax: mismatched sizes");
  std::vector<double> adjusted(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    require(source_prior[i] > 0.0, "pc_softmax: source prior for class ", i,
            " is zero");
    // log(0) target prior gives -inf, i.e. probability zero.
    adjusted[i] = logits[i] - std::log(source_prior[i]) +
                  std::log(target_prior[i]);
  }
  return softmax(adjusted);
}

/// Balanced softmax loss: cross-entropy of softmax(logit + log prior).
/// With a uniform prior the shift is constant and this is standard CE.
inline double balanced_softmax_loss(std::span<const double> logits,
                                    std::size_t target_class,
                                    std::span<const double> train_prior) {
  validate_logits(logits);
  validate_prior(train_prior, "train prior");
  require(logits.size() == train_prior.size(),
          "balanced_softmax_loss: mismatched sizes");
  require(target_class < logits.size(),
          "balanced_softmax_loss: target class out of range");
  std::vector<double> adjusted(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    require(train_prior[i] > 0.0, "balanced_softmax_loss: prior for class ",
            i, " is zero");
    adjusted[i] = logits[i] + std::log(train_prior[i]);
  }
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double v : adjusted) max_logit = std::max(max_logit, v);
  double total = 0.0;
  for (double v : adjusted) total += std::exp(v - max_logit);
  return -(adjusted[target_class] - max_logit - std::log(total));
}

}  // namespace chartail

#endif  // CHARTAIL_ADJUST_HPP_
