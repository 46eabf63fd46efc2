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
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "upsa/text.hpp"

namespace upsa {

class StopwordList {
 public:
  // Throws FormatError when empty or when an entry contains whitespace.
  explicit StopwordList(std::vector<std::string> words);

  // The built-in English list; data/stopwords_en.txt holds the same words.
  static StopwordList english();
  // One word per line; blank lines ignored.
  static StopwordList load(const std::filesystem::path& path);

  bool contains(std::string_view w) const { return words_.find(w) != words_.end(); }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string, std::less<>>& words() const { return words_; }

 private:
  std::set<std::string, std::less<>> words_;
};

struct Keyword {
  Token token;
  // Score of the best candidate phrase containing the word.
  double score = 0.0;
};

// Distinct words of the input, descending score, ties by first position.
using KeywordSet = std::vector<Keyword>;

// RAKE over a single sentence. Candidate phrases are maximal runs of tokens
// that are neither stopwords nor punctuation; each word scores
// degree / frequency, where degree sums the lengths of the phrases the word
// occurs in, and a phrase scores the sum of its word scores. Words are taken
// from phrases in descending phrase score until `max_keywords` are collected.
KeywordSet extract_keywords(const Sentence& s, const StopwordList& stopwords,
                            std::size_t max_keywords = 5);

}  // namespace upsa
