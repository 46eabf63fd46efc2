// Copyright 2026 The upsa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "upsa/errors.hpp"
#include "upsa/keywords.hpp"

using namespace upsa;

namespace {

Sentence sent(const std::string& text) { return tokenize(text, Vocabulary()); }

std::vector<std::string> surfaces(const KeywordSet& k) {
  std::vector<std::string> out;
  for (const auto& x : k) out.push_back(x.token.surface);
  return out;
}

TEST(Rake, HandRunExample) {
  // Phrases: "become good" and "studies". become and good each have
  // degree 2, frequency 1 -> 2, so the phrase scores 4; studies scores 1.
  const StopwordList sw({"how", "can", "i", "in", "?"});
  const auto k = extract_keywords(sent("how can i become good in studies ?"), sw, 5);
  ASSERT_EQ(surfaces(k), (std::vector<std::string>{"become", "good", "studies"}));
  EXPECT_EQ(k[0].score, 4.0);
  EXPECT_EQ(k[1].score, 4.0);
  EXPECT_EQ(k[2].score, 1.0);
}

TEST(Rake, AllStopwordsGivesEmptySet) {
  EXPECT_TRUE(extract_keywords(sent("is it in of ?"), StopwordList::english(), 5).empty());
}

TEST(Rake, SingleContentWord) {
  const auto k = extract_keywords(sent("studies"), StopwordList::english(), 5);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].token.surface, "studies");
  EXPECT_EQ(k[0].score, 1.0);
}

TEST(Rake, RepeatedWordAcrossPhrases) {
  // Phrases "deep learning", "learning". learning: degree 3, freq 2 -> 1.5;
  // deep: 2/1 = 2. Phrase scores 3.5 and 1.5.
  const StopwordList sw({"and"});
  const auto k = extract_keywords(sent("deep learning and learning"), sw, 5);
  ASSERT_EQ(surfaces(k), (std::vector<std::string>{"deep", "learning"}));
  EXPECT_EQ(k[0].score, 3.5);
  EXPECT_EQ(k[1].score, 3.5);
}

TEST(Rake, CapAppliesAfterRanking) {
  const StopwordList sw({"x"});
  const auto k = extract_keywords(sent("a x b c x d e f"), sw, 2);
  // "d e f" scores 9, "b c" scores 4, "a" scores 1.
  EXPECT_EQ(surfaces(k), (std::vector<std::string>{"d", "e"}));
}

TEST(Rake, PunctuationSplitsAndIsNeverKeyword) {
  const StopwordList sw({"the"});
  const auto k = extract_keywords(sent("alpha , beta ! ?"), sw, 5);
  EXPECT_EQ(surfaces(k), (std::vector<std::string>{"alpha", "beta"}));
}

TEST(Rake, Properties) {
  std::mt19937_64 rng(12);
  const auto sw = StopwordList::english();
  const std::vector<std::string> words = {"the", "is",   "python", "learn", "a",    "best",
                                          "way", "how",  "?",      "code",  "good", "i"};
  for (int trial = 0; trial < 300; ++trial) {
    const auto line = fixtures::random_lines(rng, words, 1, 1, 10).front();
    const auto s = sent(line);
    const auto k = extract_keywords(s, sw, 3);
    EXPECT_LE(k.size(), 3u);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const auto& w = k[i].token.surface;
      EXPECT_TRUE(seen.insert(w).second);
      EXPECT_FALSE(sw.contains(w));
      EXPECT_FALSE(is_punctuation(w));
      EXPECT_NE(std::find_if(s.begin(), s.end(), [&](const Token& t) { return t.surface == w; }), s.end());
      if (i) {
        EXPECT_GE(k[i - 1].score, k[i].score);
      }
    }
    EXPECT_EQ(surfaces(extract_keywords(s, sw, 3)), surfaces(k));
    EXPECT_EQ(surfaces(extract_keywords(sent("the is a how " + line), sw, 3)), surfaces(k));
  }
}

TEST(Stopwords, Validation) {
  EXPECT_THROW(StopwordList(std::vector<std::string>{}), FormatError);
  EXPECT_THROW(StopwordList({"two words"}), FormatError);
  EXPECT_TRUE(StopwordList({"The"}).contains("the"));
}

TEST(Stopwords, ShippedFileMatchesBuiltIn) {
  const auto file = StopwordList::load(std::string(UPSA_DATA_DIR) + "/stopwords_en.txt");
  EXPECT_EQ(file.words(), StopwordList::english().words());
}

TEST(Stopwords, LoadErrors) {
  fixtures::TempDir dir;
  fixtures::write_file(dir / "empty.txt", "\n\n");
  EXPECT_THROW(StopwordList::load(dir / "empty.txt"), FormatError);
  EXPECT_THROW(StopwordList::load(dir / "missing.txt"), Error);
}

}  // namespace
