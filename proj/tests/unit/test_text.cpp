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
#include "upsa/text.hpp"

using namespace upsa;

namespace {

Vocabulary small_vocab() { return Vocabulary({"how", "are", "you"}); }

TEST(Tokenize, LowercasesAndMapsIds) {
  const auto v = small_vocab();
  const auto s = tokenize("How are you", v);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].surface, "how");
  EXPECT_EQ(s[0].id, v.id("how"));
  EXPECT_EQ(s[2].id, v.id("you"));
}

TEST(Tokenize, UnknownKeepsSurface) {
  const auto v = small_vocab();
  const auto s = tokenize("how are zyx", v);
  EXPECT_EQ(s[2].surface, "zyx");
  EXPECT_EQ(s[2].id, kUnkId);
  EXPECT_TRUE(s[2].is_unknown());
}

TEST(Tokenize, WhitespaceOnlyIsEmptyInput) {
  const auto v = small_vocab();
  EXPECT_THROW(tokenize("", v), EmptyInput);
  EXPECT_THROW(tokenize("   \t\n ", v), EmptyInput);
}

TEST(Tokenize, CollapsesWhitespaceRuns) {
  const auto v = small_vocab();
  EXPECT_EQ(detokenize(tokenize("  how\tare \n you  ", v)), "how are you");
}

TEST(Tokenize, NonAsciiBytesUntouched) {
  EXPECT_EQ(to_lower("Caf\xC3\x89 ABC"), "caf\xC3\x89 abc");
}

TEST(Detokenize, JoinsWithSingleSpaces) {
  const auto v = small_vocab();
  EXPECT_EQ(detokenize(tokenize("how are you", v)), "how are you");
}

TEST(Detokenize, RoundTripOfNormalizedText) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> words = {"Alpha", "beta", "GAMMA", "d", "e?", "f,g"};
  const auto v = small_vocab();
  auto lines = fixtures::random_lines(rng, words, 200, 1, 9);
  for (const auto& line : lines) {
    const std::string normalized = to_lower(line);
    EXPECT_EQ(detokenize(tokenize(normalized, v)), normalized);
    EXPECT_EQ(tokenize(detokenize(tokenize(line, v)), v), tokenize(line, v));
  }
}

TEST(Sentence, EmptyThrows) { EXPECT_THROW(Sentence({}), EmptyInput); }

TEST(Vocabulary, ReservedEntriesComeFirst) {
  const Vocabulary v;
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.surface(kUnkId), "<unk>");
  EXPECT_EQ(v.surface(kBosId), "<s>");
  EXPECT_EQ(v.surface(kEosId), "</s>");
  EXPECT_EQ(v.id("nothing"), kUnkId);
}

TEST(Vocabulary, RejectsDuplicatesAndReserved) {
  EXPECT_THROW(Vocabulary({"a", "a"}), FormatError);
  EXPECT_THROW(Vocabulary({"<s>"}), FormatError);
  EXPECT_THROW(Vocabulary({"a b"}), FormatError);
}

TEST(BuildVocabulary, CountsAndOrder) {
  const std::vector<std::string> corpus = {"a b a", "c a b"};
  const auto v = build_vocabulary(corpus);
  EXPECT_EQ(v.words(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(v.size(), 6u);
  EXPECT_EQ(v.id("a"), 3u);
}

TEST(BuildVocabulary, TiesAreLexicographic) {
  const std::vector<std::string> corpus = {"z y x", "x y z"};
  EXPECT_EQ(build_vocabulary(corpus).words(), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(BuildVocabulary, MinCountDropsRareWords) {
  const std::vector<std::string> corpus = {"a a b", "a c c"};
  EXPECT_EQ(build_vocabulary(corpus, 2).words(), (std::vector<std::string>{"a", "c"}));
}

TEST(BuildVocabulary, ReservedSurfacesInCorpusIgnored) {
  const std::vector<std::string> corpus = {"<s> a </s> <unk>"};
  EXPECT_EQ(build_vocabulary(corpus).words(), (std::vector<std::string>{"a"}));
}

TEST(BuildVocabulary, EmptyCorpusThrows) {
  EXPECT_THROW(build_vocabulary(std::vector<std::string>{}), EmptyCorpus);
  EXPECT_THROW(build_vocabulary(std::vector<std::string>{"", "  "}), EmptyCorpus);
}

TEST(BuildVocabulary, DeterministicOnLargeCorpus) {
  std::mt19937_64 rng(11);
  std::vector<std::string> words;
  for (int i = 0; i < 300; ++i) words.push_back("w" + std::to_string(i));
  const auto corpus = fixtures::random_lines(rng, words, 1000, 1, 12);
  const auto a = build_vocabulary(corpus);
  const auto b = build_vocabulary(corpus);
  EXPECT_TRUE(a == b);
  for (const auto& line : corpus) {
    for (const auto& w : split_whitespace(line)) EXPECT_TRUE(a.contains(w));
  }
}

TEST(Punctuation, Detection) {
  EXPECT_TRUE(is_punctuation("?"));
  EXPECT_TRUE(is_punctuation("..."));
  EXPECT_FALSE(is_punctuation("a?"));
  EXPECT_FALSE(is_punctuation(""));
}

}  // namespace
