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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "upsa/errors.hpp"
#include "upsa/ngram_model.hpp"

using namespace upsa;

namespace {

std::shared_ptr<const Vocabulary> vocab_of(const std::vector<std::string>& corpus) {
  return std::make_shared<const Vocabulary>(build_vocabulary(corpus));
}

NgramModel train(const std::vector<std::string>& corpus, int order,
                 Direction dir = Direction::kForward,
                 std::shared_ptr<const Vocabulary> vocab = nullptr) {
  if (!vocab) vocab = vocab_of(corpus);
  return NgramModel::train(corpus, vocab, order, dir);
}

std::vector<std::string> random_corpus(std::uint64_t seed, std::size_t lines, std::size_t words) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> w;
  for (std::size_t i = 0; i < words; ++i) w.push_back("w" + std::to_string(i));
  return fixtures::random_lines(rng, w, lines, 1, 8);
}

std::vector<TokenId> random_context(std::mt19937_64& rng, std::size_t vocab, std::size_t len) {
  std::vector<TokenId> c(len);
  std::uniform_int_distribution<TokenId> d(0, static_cast<TokenId>(vocab - 1));
  for (auto& x : c) x = d(rng);
  return c;
}

TEST(NgramModel, RepeatedTokenHandComputed) {
  // Every sentence is "a a a": counts (<s> a)=100, (a a)=200, (a </s>)=100.
  // Continuation counts: a has 2 left contexts, </s> has 1, so
  // p1(a) = (2 - .75)/3 + .75 * 2/3 * 1/4 and
  // p(a|a) = (200 - .75)/300 + .75 * 2/300 * p1(a).
  const std::vector<std::string> corpus(100, "a a a");
  const auto m = train(corpus, 2);
  const TokenId a = m.vocabulary().id("a");
  const double p1 = 1.25 / 3 + 0.75 * 2.0 / 3 * 0.25;
  const double expected = 199.25 / 300 + 0.75 * 2.0 / 300 * p1;
  EXPECT_NEAR(m.word_prob(std::vector<TokenId>{a}, a), expected, 1e-12);
  EXPECT_NEAR(expected, 0.666875, 1e-12);
  // a is the most likely continuation of a.
  EXPECT_EQ(m.topk_continuations(std::vector<TokenId>{a}, 1).front().first, a);
}

TEST(NgramModel, ObservedBigramBeatsUnseen) {
  const std::vector<std::string> corpus(100, "a b");
  const auto m = train(corpus, 2);
  const TokenId a = m.vocabulary().id("a"), b = m.vocabulary().id("b");
  EXPECT_GT(m.word_prob(std::vector<TokenId>{a}, b), m.word_prob(std::vector<TokenId>{a}, a));
  EXPECT_EQ(m.topk_continuations(std::vector<TokenId>{a}, 1).front().first, b);
}

TEST(NgramModel, SeenTokenBeatsUnk) {
  const std::vector<std::string> corpus(100, "a a");
  const auto m = train(corpus, 2);
  const TokenId a = m.vocabulary().id("a");
  EXPECT_GT(m.word_prob(std::vector<TokenId>{a}, a), m.word_prob(std::vector<TokenId>{a}, kUnkId));
}

TEST(NgramModel, TokenCountsPerDirection) {
  const std::vector<std::string> corpus = {"a b c"};
  const auto vocab = vocab_of(corpus);
  const auto fwd = train(corpus, 2, Direction::kForward, vocab);
  const auto bwd = train(corpus, 2, Direction::kBackward, vocab);
  for (const char* w : {"a", "b", "c"}) {
    EXPECT_EQ(fwd.token_count(vocab->id(w)), 1u);
    EXPECT_EQ(bwd.token_count(vocab->id(w)), 1u);
  }
  EXPECT_EQ(fwd.token_count(kEosId), 1u);
  EXPECT_EQ(bwd.token_count(kEosId), 1u);
  EXPECT_EQ(fwd.token_count(kBosId), 0u);
  // The backward model reads "c b a".
  const TokenId a = vocab->id("a"), b = vocab->id("b"), c = vocab->id("c");
  EXPECT_GT(bwd.word_prob(std::vector<TokenId>{c}, b), bwd.word_prob(std::vector<TokenId>{a}, b));
  EXPECT_GT(fwd.word_prob(std::vector<TokenId>{a}, b), fwd.word_prob(std::vector<TokenId>{c}, b));
}

TEST(NgramModel, UnseenContextBacksOffToUnigram) {
  const std::vector<std::string> corpus = {"a b c", "b c d", "a c"};
  const auto m = train(corpus, 2);
  const auto vocab = m.shared_vocabulary();
  std::set<std::string> known;
  for (const auto& w : vocab->words()) known.insert(w);
  oracle::KneserNey uni(corpus, 1, false, known, vocab->size());
  // `z` is not in the vocabulary, so its id is UNK, which never occurs.
  const TokenId z = vocab->id("z");
  ASSERT_EQ(z, kUnkId);
  // The order-2 model's lower distribution is built from continuation
  // counts, not raw unigram counts; check against the bigram oracle's backoff.
  oracle::KneserNey bi(corpus, 2, false, known, vocab->size());
  for (TokenId w = 0; w < vocab->size(); ++w) {
    const double p = m.word_prob(std::vector<TokenId>{z}, w);
    EXPECT_EQ(p, m.word_prob(std::vector<TokenId>{}, w));
    EXPECT_NEAR(p, bi.prob({"<unk>"}, vocab->surface(w)), 1e-12);
  }
  // An order-1 model ignores context entirely and matches the raw unigram oracle.
  const auto m1 = train(corpus, 1);
  for (TokenId w = 0; w < vocab->size(); ++w) {
    EXPECT_NEAR(m1.word_prob(std::vector<TokenId>{z}, w), uni.prob({}, vocab->surface(w)), 1e-12);
  }
}

class NgramOrders : public ::testing::TestWithParam<int> {};

TEST_P(NgramOrders, NormalizedAndPositive) {
  const int order = GetParam();
  const auto corpus = random_corpus(100 + static_cast<std::uint64_t>(order), 300, 25);
  const auto m = train(corpus, order);
  std::mt19937_64 rng(5);
  const std::size_t v = m.vocabulary().size();
  for (int trial = 0; trial < 200; ++trial) {
    const auto ctx = random_context(rng, v, static_cast<std::size_t>(rng() % 5));
    const auto dist = m.distribution(ctx);
    ASSERT_EQ(dist.size(), v);
    double sum = 0;
    for (double p : dist) {
      EXPECT_GT(p, 0.0);
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST_P(NgramOrders, AgreesWithStringKeyedOracle) {
  const int order = GetParam();
  if (order > 3) GTEST_SKIP() << "oracle is exhaustive; orders up to 3 suffice";
  const auto corpus = random_corpus(200 + static_cast<std::uint64_t>(order), 150, 12);
  const auto vocab = vocab_of(corpus);
  std::set<std::string> known;
  for (const auto& w : vocab->words()) known.insert(w);
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    const auto m = train(corpus, order, dir, vocab);
    oracle::KneserNey o(corpus, order, dir == Direction::kBackward, known, vocab->size());
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      const auto ctx = random_context(rng, vocab->size(), static_cast<std::size_t>(order - 1));
      oracle::Words sctx;
      for (auto id : ctx) sctx.push_back(vocab->surface(id));
      for (TokenId w = 0; w < vocab->size(); ++w) {
        ASSERT_NEAR(m.word_prob(ctx, w), o.prob(sctx, vocab->surface(w)), 1e-12);
      }
    }
    for (std::size_t i = 0; i < 40; ++i) {
      const auto s = tokenize(corpus[i], *vocab);
      EXPECT_NEAR(m.sequence_logprob(s), o.log_sequence(fixtures::words_of(s), dir == Direction::kBackward),
                  1e-9);
    }
  }
}

TEST_P(NgramOrders, WordProbMatchesDistributionBitwise) {
  const int order = GetParam();
  const auto corpus = random_corpus(300 + static_cast<std::uint64_t>(order), 200, 20);
  const auto m = train(corpus, order);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ctx = random_context(rng, m.vocabulary().size(), static_cast<std::size_t>(order));
    const auto dist = m.distribution(ctx);
    for (TokenId w = 0; w < dist.size(); ++w) ASSERT_EQ(dist[w], m.word_prob(ctx, w));
  }
}

TEST_P(NgramOrders, SequenceLogprobIsSumOfTerms) {
  const int order = GetParam();
  const auto corpus = random_corpus(400 + static_cast<std::uint64_t>(order), 100, 15);
  const auto m = train(corpus, order);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto s = tokenize(corpus[i], m.vocabulary());
    const auto padded = m.padded_reading_order(s.ids());
    double sum = 0;
    for (std::size_t j = static_cast<std::size_t>(order - 1); j < padded.size(); ++j) {
      std::span<const TokenId> ctx(padded.data() + j - (order - 1), static_cast<std::size_t>(order - 1));
      sum += std::log(m.word_prob(ctx, padded[j]));
    }
    EXPECT_NEAR(m.sequence_logprob(s), sum, 1e-9);
  }
}

TEST_P(NgramOrders, BackwardEqualsForwardOnReversedCorpus) {
  const int order = GetParam();
  const auto corpus = random_corpus(500 + static_cast<std::uint64_t>(order), 120, 15);
  std::vector<std::string> reversed;
  for (const auto& line : corpus) {
    auto w = split_whitespace(line);
    std::reverse(w.begin(), w.end());
    std::string r;
    for (const auto& x : w) r += (r.empty() ? "" : " ") + x;
    reversed.push_back(r);
  }
  const auto vocab = vocab_of(corpus);
  const auto bwd = train(corpus, order, Direction::kBackward, vocab);
  const auto fwd_rev = train(reversed, order, Direction::kForward, vocab);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto s = tokenize(corpus[i], *vocab);
    const auto r = tokenize(reversed[i], *vocab);
    EXPECT_EQ(bwd.sequence_logprob(s), fwd_rev.sequence_logprob(r));
  }
}

TEST_P(NgramOrders, TopkIsPrefixOfFullRanking) {
  const int order = GetParam();
  const auto corpus = random_corpus(600 + static_cast<std::uint64_t>(order), 150, 12);
  const auto m = train(corpus, order);
  const std::size_t v = m.vocabulary().size();
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ctx = random_context(rng, v, static_cast<std::size_t>(order - 1));
    std::vector<std::pair<TokenId, double>> full;
    for (TokenId w = 0; w < v; ++w) {
      if (w != kBosId) full.emplace_back(w, m.word_prob(ctx, w));
    }
    std::stable_sort(full.begin(), full.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    EXPECT_EQ(m.topk_continuations(ctx, v + 5), full);
    for (std::size_t k : {std::size_t{1}, std::size_t{3}, std::size_t{7}}) {
      const auto top = m.topk_continuations(ctx, k);
      ASSERT_EQ(top.size(), k);
      EXPECT_TRUE(std::equal(top.begin(), top.end(), full.begin()));
    }
  }
}

TEST_P(NgramOrders, SaveLoadRoundTripBitwise) {
  const int order = GetParam();
  const auto corpus = random_corpus(700 + static_cast<std::uint64_t>(order), 200, 30);
  for (Direction dir : {Direction::kForward, Direction::kBackward}) {
    const auto m = train(corpus, order, dir);
    const std::string bytes = m.save();
    EXPECT_EQ(bytes, train(corpus, order, dir).save());
    const auto loaded = NgramModel::load(bytes);
    EXPECT_EQ(loaded.order(), order);
    EXPECT_EQ(loaded.direction(), dir);
    EXPECT_TRUE(loaded.vocabulary() == m.vocabulary());
    EXPECT_EQ(loaded.save(), bytes);
    std::mt19937_64 rng(10);
    for (int q = 0; q < 1000; ++q) {
      const auto ctx = random_context(rng, m.vocabulary().size(), static_cast<std::size_t>(order - 1));
      const TokenId w = static_cast<TokenId>(rng() % m.vocabulary().size());
      const double a = m.word_prob(ctx, w), b = loaded.word_prob(ctx, w);
      ASSERT_EQ(std::memcmp(&a, &b, sizeof a), 0);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, NgramOrders, ::testing::Values(1, 2, 3, 4));

TEST(NgramModel, PermutationsScoreNoHigherThanTrainingSentence) {
  const std::vector<std::string> corpus = {"the cat sat down"};
  const auto m = train(corpus, 3);
  auto words = split_whitespace(corpus[0]);
  const double original = m.sequence_logprob(tokenize(corpus[0], m.vocabulary()));
  std::sort(words.begin(), words.end());
  do {
    std::string line;
    for (const auto& w : words) line += (line.empty() ? "" : " ") + w;
    EXPECT_LE(m.sequence_logprob(tokenize(line, m.vocabulary())), original) << line;
  } while (std::next_permutation(words.begin(), words.end()));
}

TEST(NgramModel, OrderOneIsDirectionFree) {
  const auto corpus = random_corpus(800, 100, 10);
  const auto vocab = vocab_of(corpus);
  const auto fwd = train(corpus, 1, Direction::kForward, vocab);
  const auto bwd = train(corpus, 1, Direction::kBackward, vocab);
  for (const auto& line : corpus) {
    const auto s = tokenize(line, *vocab);
    EXPECT_NEAR(fwd.sequence_logprob(s), bwd.sequence_logprob(s), 1e-12);
  }
}

TEST(NgramModel, TrainingErrors) {
  const auto vocab = std::make_shared<const Vocabulary>();
  EXPECT_THROW(NgramModel::train(std::vector<std::string>{}, vocab, 2, Direction::kForward), EmptyCorpus);
  EXPECT_THROW(NgramModel::train(std::vector<std::string>{"  "}, vocab, 2, Direction::kForward),
               EmptyCorpus);
  const std::vector<std::string> corpus = {"a b"};
  const auto v = vocab_of(corpus);
  EXPECT_THROW(NgramModel::train(corpus, v, 0, Direction::kForward), std::invalid_argument);
  EXPECT_THROW(NgramModel::train(corpus, v, 6, Direction::kForward), std::invalid_argument);
  EXPECT_THROW(NgramModel::train(corpus, v, 2, Direction::kForward, 1.0), std::invalid_argument);
  EXPECT_THROW(NgramModel::train(corpus, v, 2, Direction::kForward, 0.0), std::invalid_argument);
}

TEST(NgramFormat, EmptyAndTruncatedPayloads) {
  const std::vector<std::string> corpus = {"a b c", "a c"};
  const std::string bytes = train(corpus, 2).save();
  EXPECT_THROW(NgramModel::load(""), FormatError);
  for (std::size_t n = 0; n < bytes.size(); ++n) {
    EXPECT_THROW(NgramModel::load(std::string_view(bytes).substr(0, n)), FormatError) << n;
  }
  EXPECT_THROW(NgramModel::load(bytes + "x"), FormatError);
}

TEST(NgramFormat, EveryCorruptedByteIsRejected) {
  const std::vector<std::string> corpus = {"a b c", "a c"};
  const std::string bytes = train(corpus, 2).save();
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::string bad = bytes;
    bad[i] = static_cast<char>(bad[i] ^ 0x5A);
    EXPECT_THROW(NgramModel::load(bad), FormatError) << i;
  }
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string with_checksum(std::string body) {
  const std::uint64_t h = fnv1a(body);
  for (int i = 0; i < 8; ++i) body.push_back(static_cast<char>((h >> (8 * i)) & 0xFF));
  return body;
}

TEST(NgramFormat, VersionMismatchWithValidChecksum) {
  const std::vector<std::string> corpus = {"a b c"};
  std::string bytes = train(corpus, 2).save();
  ASSERT_EQ(with_checksum(bytes.substr(0, bytes.size() - 8)), bytes);
  std::string body = bytes.substr(0, bytes.size() - 8);
  body[8] = 2;  // version field follows the 8-byte magic
  EXPECT_THROW(NgramModel::load(with_checksum(body)), FormatError);
  body = bytes.substr(0, bytes.size() - 8);
  body[0] = 'X';
  EXPECT_THROW(NgramModel::load(with_checksum(body)), FormatError);
}

TEST(NgramFormat, FileRoundTrip) {
  fixtures::TempDir dir;
  const std::vector<std::string> corpus = {"a b c", "c b a"};
  const auto m = train(corpus, 3, Direction::kBackward);
  m.save_file(dir / "m.lm");
  EXPECT_EQ(NgramModel::load_file(dir / "m.lm").save(), m.save());
  EXPECT_THROW(NgramModel::load_file(dir / "missing.lm"), Error);
}

}  // namespace
