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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace upsa {

using TokenId = std::uint32_t;

// Reserved ids. Every Vocabulary places them first, in this order.
inline constexpr TokenId kUnkId = 0;
inline constexpr TokenId kBosId = 1;
inline constexpr TokenId kEosId = 2;
inline constexpr std::string_view kUnkSurface = "<unk>";
inline constexpr std::string_view kBosSurface = "<s>";
inline constexpr std::string_view kEosSurface = "</s>";

// A word occurrence. Out-of-vocabulary words carry kUnkId but keep their
// original surface so that copying and metrics still see the real word.
struct Token {
  std::string surface;
  TokenId id = kUnkId;

  bool is_unknown() const { return id == kUnkId; }
  friend bool operator==(const Token& a, const Token& b) {
    return a.id == b.id && a.surface == b.surface;
  }
};

// Immutable, non-empty token sequence.
class Sentence {
 public:
  // Throws EmptyInput if `tokens` is empty.
  explicit Sentence(std::vector<Token> tokens);

  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  std::span<const Token> tokens() const { return tokens_; }
  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  std::vector<TokenId> ids() const;
  std::vector<std::string_view> surfaces() const;

  friend bool operator==(const Sentence& a, const Sentence& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<Token> tokens_;
};

class Vocabulary {
 public:
  // Only the three reserved entries.
  Vocabulary();
  // `surfaces` are the non-reserved entries in id order (ids start at 3).
  // Throws FormatError on duplicates, reserved surfaces or whitespace.
  explicit Vocabulary(std::vector<std::string> surfaces);

  std::size_t size() const { return surfaces_.size(); }
  const std::string& surface(TokenId id) const { return surfaces_.at(id); }
  // kUnkId when absent.
  TokenId id(std::string_view surface) const;
  bool contains(std::string_view surface) const;
  Token token(std::string_view surface) const;

  // Non-reserved surfaces in id order.
  std::vector<std::string> words() const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.surfaces_ == b.surfaces_;
  }

 private:
  void index();

  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, TokenId> ids_;
};

// ASCII lowercase; bytes >= 0x80 are left untouched.
std::string to_lower(std::string_view text);

// Splits on ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view text);

// Whitespace split + lowercase, ids looked up in `vocab`.
// Throws EmptyInput when nothing but whitespace remains.
Sentence tokenize(std::string_view text, const Vocabulary& vocab);

// Surfaces joined with single spaces.
std::string detokenize(const Sentence& s);

// Words with count >= min_count, ordered by descending count then surface.
// Reserved surfaces occurring in the corpus are not counted.
// Throws EmptyCorpus when the corpus has no tokens.
Vocabulary build_vocabulary(std::span<const std::string> corpus,
                            std::size_t min_count = 1);

// Whether every byte of the surface is ASCII punctuation.
bool is_punctuation(std::string_view surface);

}  // namespace upsa
