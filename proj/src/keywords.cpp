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

#include "upsa/keywords.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "upsa/errors.hpp"

namespace upsa {
namespace {

// Common English function words.
constexpr std::string_view kEnglish[] = {
    "a",       "about",   "above",   "after",   "again",   "against", "all",
    "am",      "an",      "and",     "any",     "are",     "as",      "at",
    "be",      "because", "been",    "before",  "being",   "below",   "between",
    "both",    "but",     "by",      "can",     "could",   "did",     "do",
    "does",    "doing",   "down",    "during",  "each",    "few",     "for",
    "from",    "further", "had",     "has",     "have",    "having",  "he",
    "her",     "here",    "hers",    "herself", "him",     "himself", "his",
    "how",     "i",       "if",      "in",      "into",    "is",      "it",
    "its",     "itself",  "just",    "me",      "might",   "more",    "most",
    "must",    "my",      "myself",  "no",      "nor",     "not",     "now",
    "of",      "off",     "on",      "once",    "only",    "or",      "other",
    "our",     "ours",    "ourselves", "out",   "over",    "own",     "same",
    "shall",   "she",     "should",  "so",      "some",    "such",    "than",
    "that",    "the",     "their",   "theirs",  "them",    "themselves",
    "then",    "there",   "these",   "they",    "this",    "those",   "through",
    "to",      "too",     "under",   "until",   "up",      "very",    "was",
    "we",      "were",    "what",    "when",    "where",   "which",   "while",
    "who",     "whom",    "why",     "will",    "with",    "would",   "you",
    "your",    "yours",   "yourself", "yourselves",
};

}  // namespace

StopwordList::StopwordList(std::vector<std::string> words) {
  for (auto& w : words) {
    if (w.empty() || std::any_of(w.begin(), w.end(), [](char c) {
          return c == ' ' || c == '\t' || c == '\n' || c == '\r';
        })) {
      throw FormatError("invalid stopword '" + w + "'");
    }
    words_.insert(to_lower(w));
  }
  if (words_.empty()) throw FormatError("stopword list is empty");
}

StopwordList StopwordList::english() {
  return StopwordList(std::vector<std::string>(std::begin(kEnglish), std::end(kEnglish)));
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopwords " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() > 1) throw FormatError("stopword line contains whitespace: " + line);
    words.push_back(std::move(fields[0]));
  }
  return StopwordList(std::move(words));
}

KeywordSet extract_keywords(const Sentence& s, const StopwordList& stopwords,
                            std::size_t max_keywords) {
  struct Phrase {
    std::size_t begin, end;
    double score = 0.0;
  };
  std::vector<Phrase> phrases;
  for (std::size_t i = 0; i < s.size();) {
    auto is_delim = [&](std::size_t k) {
      return stopwords.contains(s[k].surface) || is_punctuation(s[k].surface);
    };
    if (is_delim(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !is_delim(j)) ++j;
    phrases.push_back({i, j});
    i = j;
  }

  std::map<std::string_view, double> freq, degree;
  for (const auto& p : phrases) {
    for (std::size_t k = p.begin; k < p.end; ++k) {
      freq[s[k].surface] += 1.0;
      degree[s[k].surface] += static_cast<double>(p.end - p.begin);
    }
  }
  for (auto& p : phrases) {
    for (std::size_t k = p.begin; k < p.end; ++k) {
      p.score += degree[s[k].surface] / freq[s[k].surface];
    }
  }
  // Each distinct word keeps its best phrase score; `out` is in order of
  // first occurrence before sorting.
  KeywordSet out;
  for (const auto& p : phrases) {
    for (std::size_t k = p.begin; k < p.end; ++k) {
      auto it = std::find_if(out.begin(), out.end(), [&](const Keyword& kw) {
        return kw.token.surface == s[k].surface;
      });
      if (it == out.end()) {
        out.push_back({s[k], p.score});
      } else {
        it->score = std::max(it->score, p.score);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Keyword& a, const Keyword& b) { return a.score > b.score; });
  if (out.size() > max_keywords) out.resize(max_keywords);
  return out;
}

}  // namespace upsa
