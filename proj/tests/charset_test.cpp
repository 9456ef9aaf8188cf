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

#include "chartail/charset.hpp"

#include <gtest/gtest.h>

#include <random>

namespace chartail {
namespace {

Charset abc() { return Charset({U'a', U'b', U'c'}); }

TEST(Charset, BasicLookups) {
  const Charset cs = abc();
  EXPECT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs.num_classes(), 6u);  // symbols + PAD/EOS/UNK
  EXPECT_TRUE(cs.contains(U'a'));
  EXPECT_FALSE(cs.contains(U'z'));
  EXPECT_EQ(cs.index_of(U'b').value(), 1);
  EXPECT_EQ(cs.symbol(2), U'c');
  EXPECT_FALSE(cs.index_of(U'z').has_value());
}

TEST(Charset, RejectsDuplicatesAndSpecials) {
  EXPECT_THROW(Charset({U'a', U'a'}), Error);
  EXPECT_THROW(Charset({U'a', kEos}), Error);
  EXPECT_THROW(Charset({kPad}), Error);
}

TEST(FrequencyTable, PerSampleCountsOncePerWord) {
  const Charset cs = abc();
  const std::vector<std::u32string> words = {U"aa", U"ab"};
  const FrequencyTable t =
      build_frequency_table(words, cs, CountMode::kPerSample);
  EXPECT_EQ(t.count(U'a'), 2);
  EXPECT_EQ(t.count(U'b'), 1);
  EXPECT_EQ(t.count(U'c'), 0);  // unseen symbols get a zero row
  EXPECT_EQ(t.total_samples(), 2);
}

TEST(FrequencyTable, PerOccurrenceCountsRepetitions) {
  const Charset cs = abc();
  const std::vector<std::u32string> words = {U"aa", U"ab"};
  const FrequencyTable t =
      build_frequency_table(words, cs, CountMode::kPerOccurrence);
  EXPECT_EQ(t.count(U'a'), 3);
  EXPECT_EQ(t.count(U'b'), 1);
}

TEST(FrequencyTable, EmptyCorpus) {
  const Charset cs = abc();
  const std::vector<std::u32string> words;
  const FrequencyTable t =
      build_frequency_table(words, cs, CountMode::kPerSample);
  EXPECT_EQ(t.total_samples(), 0);
  EXPECT_EQ(t.count(U'a'), 0);
}

TEST(FrequencyTable, RejectsForeignCharacters) {
  const Charset cs = abc();
  const std::vector<std::u32string> words = {U"ax"};
  try {
    build_frequency_table(words, cs, CountMode::kPerSample);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string message = e.what();
    EXPECT_NE(message.find("ax"), std::string::npos);
    EXPECT_NE(message.find('x'), std::string::npos);
  }
}

TEST(FrequencyTable, PerSampleInvariantUnderRepetition) {
  const Charset cs = abc();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::u32string base;
    for (int i = 0; i < 5; ++i) {
      base.push_back(static_cast<char32_t>(U'a' + rng() % 3));
    }
    std::u32string repeated = base;
    repeated += base;  // duplicate every character within the word
    const std::vector<std::u32string> w1 = {base};
    const std::vector<std::u32string> w2 = {repeated};
    const FrequencyTable t1 = build_frequency_table(w1, cs, CountMode::kPerSample);
    const FrequencyTable t2 = build_frequency_table(w2, cs, CountMode::kPerSample);
    EXPECT_EQ(t1.counts(), t2.counts());
  }
}

TEST(Categorize, PaperThresholds) {
  const CategoryThresholds thresholds;
  EXPECT_EQ(category_for_count(1500, thresholds), CharCategory::kMany);
  EXPECT_EQ(category_for_count(100, thresholds), CharCategory::kMedium);
  EXPECT_EQ(category_for_count(99, thresholds), CharCategory::kFew);
  EXPECT_EQ(category_for_count(1499, thresholds), CharCategory::kMedium);
  EXPECT_EQ(category_for_count(0, thresholds), CharCategory::kFew);
}

TEST(Categorize, PartitionsTheCharset) {
  const Charset cs = abc();
  std::vector<std::u32string> words;
  for (int i = 0; i < 2000; ++i) words.push_back(U"a");
  for (int i = 0; i < 150; ++i) words.push_back(U"b");
  const FrequencyTable t =
      build_frequency_table(words, cs, CountMode::kPerSample);
  const CategoryMap cats = categorize(t, CategoryThresholds{});
  EXPECT_EQ(cats.size(), cs.size());
  EXPECT_EQ(cats.at(U'a'), CharCategory::kMany);
  EXPECT_EQ(cats.at(U'b'), CharCategory::kMedium);
  EXPECT_EQ(cats.at(U'c'), CharCategory::kFew);
  // Absent characters are Few with an implied count of zero.
  EXPECT_EQ(category_of(cats, U'z'), CharCategory::kFew);
}

TEST(Categorize, MonotoneInCount) {
  const CategoryThresholds thresholds;
  CharCategory previous = CharCategory::kFew;
  for (std::int64_t n = 0; n <= 2000; ++n) {
    const CharCategory current = category_for_count(n, thresholds);
    EXPECT_GE(static_cast<int>(current), static_cast<int>(previous));
    previous = current;
  }
}

TEST(Categorize, RejectsBadThresholds) {
  const Charset cs = abc();
  const std::vector<std::u32string> words = {U"a"};
  const FrequencyTable t =
      build_frequency_table(words, cs, CountMode::kPerSample);
  EXPECT_THROW(categorize(t, CategoryThresholds{100, 1500}), Error);
  EXPECT_THROW(categorize(t, CategoryThresholds{100, 0}), Error);
}

}  // namespace
}  // namespace chartail
