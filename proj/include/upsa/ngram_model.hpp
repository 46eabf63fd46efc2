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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "upsa/language_model.hpp"
#include "upsa/text.hpp"

namespace upsa {

// Interpolated Kneser-Ney n-gram model.
//
// The highest order is estimated from raw counts, every lower order from
// continuation counts (number of distinct left extensions), and the recursion
// bottoms out in the uniform distribution over the whole vocabulary:
//
//   p_m(w | h) = gamma(h) * p_{m-1}(w | h') + max(c(h w) - D_m, 0) / c(h)
//   gamma(h)   = D_m * |{w : c(h w) > 0}| / c(h)
//
// Contexts never seen at order m leave p_{m-1} unchanged.
//
// Serialized layout (all integers little-endian):
//   magic "UPSA-LM\0" | u32 version | u32 order | u8 direction | 3 zero bytes
//   | f64 discount x order | u32 word count | (u32 length, bytes) per word
//   | for m = 1..order: u64 entries, then per entry m x u32 ids + u64 count,
//     entries strictly ascending
//   | u64 FNV-1a checksum of everything before it
class NgramModel final : public LanguageModel {
 public:
  static constexpr int kMaxOrder = 5;
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr double kDefaultDiscount = 0.75;

  using Ngram = std::vector<TokenId>;
  // Index m-1 holds the order-m table: raw counts for the highest order,
  // continuation counts below it.
  using CountTables = std::vector<std::map<Ngram, std::uint64_t>>;

  // Throws EmptyCorpus when `corpus` has no tokens and std::invalid_argument
  // for an order outside [1, kMaxOrder] or a discount outside (0, 1).
  static NgramModel train(std::span<const std::string> corpus,
                          std::shared_ptr<const Vocabulary> vocab, int order,
                          Direction direction,
                          double discount = kDefaultDiscount);

  // Throws FormatError on any malformed payload.
  static NgramModel load(std::string_view bytes);
  static NgramModel load_file(const std::filesystem::path& path);
  std::string save() const;
  void save_file(const std::filesystem::path& path) const;

  int order() const override { return order_; }
  Direction direction() const override { return direction_; }
  const Vocabulary& vocabulary() const override { return *vocab_; }
  std::shared_ptr<const Vocabulary> shared_vocabulary() const { return vocab_; }

  double word_prob(std::span<const TokenId> context, TokenId w) const override;
  std::vector<double> distribution(std::span<const TokenId> context) const override;

  const CountTables& count_tables() const { return tables_; }
  std::span<const double> discounts() const { return discounts_; }
  // Occurrences of `w` as a predicted token (EOS included, BOS never).
  std::uint64_t token_count(TokenId w) const;

 private:
  using ContextKey = std::array<TokenId, kMaxOrder - 1>;
  struct ContextKeyHash {
    std::size_t operator()(const ContextKey& k) const;
  };
  struct ContextStats {
    std::uint64_t total = 0;
    std::uint64_t distinct = 0;
    // Sorted by id.
    std::vector<std::pair<TokenId, std::uint64_t>> followers;
  };
  using ContextIndex = std::unordered_map<ContextKey, ContextStats, ContextKeyHash>;

  NgramModel(std::shared_ptr<const Vocabulary> vocab, int order,
             Direction direction, std::vector<double> discounts,
             CountTables tables);

  void build_index();
  static ContextKey make_key(std::span<const TokenId> context);
  const ContextStats* find(int m, std::span<const TokenId> context) const;

  std::shared_ptr<const Vocabulary> vocab_;
  int order_;
  Direction direction_;
  std::vector<double> discounts_;
  CountTables tables_;
  std::vector<ContextIndex> index_;
  std::vector<std::uint64_t> token_counts_;
};

}  // namespace upsa
