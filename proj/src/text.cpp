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

#include "upsa/text.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "upsa/errors.hpp"

namespace upsa {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_reserved(std::string_view s) {
  return s == kUnkSurface || s == kBosSurface || s == kEosSurface;
}

}  // namespace

Sentence::Sentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw EmptyInput("sentence must contain a token");
}

std::vector<TokenId> Sentence::ids() const {
  std::vector<TokenId> out;
  out.reserve(tokens_.size());
  for (const auto& t : tokens_) out.push_back(t.id);
  return out;
}

std::vector<std::string_view> Sentence::surfaces() const {
  std::vector<std::string_view> out;
  out.reserve(tokens_.size());
  for (const auto& t : tokens_) out.emplace_back(t.surface);
  return out;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> surfaces) {
  surfaces_.reserve(surfaces.size() + 3);
  surfaces_.emplace_back(kUnkSurface);
  surfaces_.emplace_back(kBosSurface);
  surfaces_.emplace_back(kEosSurface);
  for (auto& s : surfaces) {
    if (s.empty() || is_reserved(s) ||
        std::any_of(s.begin(), s.end(), is_space)) {
      throw FormatError("invalid vocabulary entry '" + s + "'");
    }
    surfaces_.push_back(std::move(s));
  }
  index();
}

void Vocabulary::index() {
  ids_.reserve(surfaces_.size());
  for (TokenId i = 0; i < surfaces_.size(); ++i) {
    if (!ids_.emplace(surfaces_[i], i).second) {
      throw FormatError("duplicate vocabulary entry '" + surfaces_[i] + "'");
    }
  }
}

TokenId Vocabulary::id(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  return it == ids_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view surface) const {
  return ids_.find(std::string(surface)) != ids_.end();
}

Token Vocabulary::token(std::string_view surface) const {
  return Token{std::string(surface), id(surface)};
}

std::vector<std::string> Vocabulary::words() const {
  return {surfaces_.begin() + 3, surfaces_.end()};
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Sentence tokenize(std::string_view text, const Vocabulary& vocab) {
  auto words = split_whitespace(text);
  if (words.empty()) throw EmptyInput("input is empty after trimming");
  std::vector<Token> tokens;
  tokens.reserve(words.size());
  for (auto& w : words) {
    std::string lower = to_lower(w);
    TokenId id = vocab.id(lower);
    tokens.push_back(Token{std::move(lower), id});
  }
  return Sentence(std::move(tokens));
}

std::string detokenize(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out.push_back(' ');
    out += s[i].surface;
  }
  return out;
}

Vocabulary build_vocabulary(std::span<const std::string> corpus,
                            std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& line : corpus) {
    for (auto& w : split_whitespace(line)) {
      ++total;
      std::string lower = to_lower(w);
      if (is_reserved(lower)) continue;
      ++counts[std::move(lower)];
    }
  }
  if (total == 0) throw EmptyCorpus("corpus contains no tokens");

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [w, c] : counts) {
    if (c >= min_count) kept.emplace_back(w, c);
  }
  // `counts` is already lexicographic, so a stable sort on count suffices.
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  std::vector<std::string> surfaces;
  surfaces.reserve(kept.size());
  for (auto& [w, c] : kept) surfaces.push_back(std::move(w));
  return Vocabulary(std::move(surfaces));
}

bool is_punctuation(std::string_view surface) {
  if (surface.empty()) return false;
  return std::all_of(surface.begin(), surface.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && u > 0x20 && !(c >= 'a' && c <= 'z') &&
           !(c >= 'A' && c <= 'Z') && !(c >= '0' && c <= '9');
  });
}

}  // namespace upsa
