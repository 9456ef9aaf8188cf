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

#ifndef CHARTAIL_DETAIL_RNG_HPP_
#define CHARTAIL_DETAIL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "chartail/error.hpp"

namespace chartail {

// The std:: distributions are implementation-defined, so every draw here
// is derived from raw mt19937_64 output: identical seeds give identical
// streams on any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). Multiply-shift; bias is O(n / 2^64).
  std::size_t next_index(std::size_t n) {
    CHARTAIL_CHECK(n > 0);
    __extension__ using uint128 = unsigned __int128;
    const uint128 wide = static_cast<uint128>(next_u64()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

  /// Standard normal via Box-Muller; the second value of each pair is
  /// cached so draws come in a fixed order.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Poisson draw by inverse-product (Knuth); fine for small means.
  std::size_t next_poisson(double mean) {
    CHARTAIL_CHECK(mean >= 0.0);
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double product = 1.0;
    for (;;) {
      product *= next_double();
      if (product <= limit) return k;
      ++k;
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Derives an independent stream seed from (seed, stream).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return detail::splitmix64(detail::splitmix64(seed) ^ stream);
}

/// FNV-1a over code units; used to give each word its own noise stream.
inline std::uint64_t hash_text(std::u32string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char32_t c : s) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Samples indices proportionally to fixed non-negative weights.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> weights) {
    require(!weights.empty(), "discrete sampler needs at least one weight");
    cumulative_.reserve(weights.size());
    double total = 0.0;
    for (double w : weights) {
      require(w >= 0.0 && std::isfinite(w),
              "discrete sampler weights must be finite and non-negative");
      total += w;
      cumulative_.push_back(total);
    }
    require(total > 0.0, "discrete sampler weights sum to zero");
    total_ = total;
  }

  std::size_t sample(Rng& rng) const {
    const double u = rng.next_double() * total_;
    std::size_t lo = 0;
    std::size_t hi = cumulative_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative_[mid] > u) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace chartail

#endif  // CHARTAIL_DETAIL_RNG_HPP_
