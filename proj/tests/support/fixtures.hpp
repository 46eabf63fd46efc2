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

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "upsa/embeddings.hpp"
#include "upsa/ngram_model.hpp"
#include "upsa/text.hpp"

namespace fixtures {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("upsa_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_lines(const std::filesystem::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
}

// Language models, embeddings and a string-keyed copy of everything for the
// oracles, all built from one small corpus.
struct World {
  std::vector<std::string> corpus;
  std::shared_ptr<const upsa::Vocabulary> vocab;
  std::shared_ptr<upsa::NgramModel> forward;
  std::shared_ptr<upsa::NgramModel> backward;
  upsa::EmbeddingTable embeddings;
  oracle::Table table;
  std::size_t dim = 0;
  int order = 2;

  upsa::Sentence sentence(const std::string& text) const { return upsa::tokenize(text, *vocab); }

  std::set<std::string> known() const {
    auto w = vocab->words();
    return {w.begin(), w.end()};
  }

  oracle::KneserNey oracle_lm(bool backward_model) const {
    return oracle::KneserNey(corpus, order, backward_model, known(), vocab->size());
  }
};

inline World make_world(std::vector<std::string> corpus, int order,
                        const std::vector<std::pair<std::string, std::vector<double>>>& vectors) {
  World w;
  w.corpus = std::move(corpus);
  w.order = order;
  w.vocab = std::make_shared<const upsa::Vocabulary>(upsa::build_vocabulary(w.corpus));
  w.forward = std::make_shared<upsa::NgramModel>(
      upsa::NgramModel::train(w.corpus, w.vocab, order, upsa::Direction::kForward));
  w.backward = std::make_shared<upsa::NgramModel>(
      upsa::NgramModel::train(w.corpus, w.vocab, order, upsa::Direction::kBackward));
  if (!vectors.empty()) {
    w.dim = vectors.front().second.size();
    w.embeddings = upsa::EmbeddingTable(w.dim);
    for (const auto& [s, v] : vectors) {
      w.embeddings.add(s, v);
      w.table[s] = v;
    }
  }
  return w;
}

// The ten-word toy world: a few question templates and hand-placed 3-d
// vectors with two synonym pairs (learn/study, python/code).
inline World toy_world(int order = 2) {
  std::vector<std::string> corpus = {
      "how can i learn python", "how do i learn python", "how can i study python",
      "best way learn python",  "best way study code",   "how can i learn code",
      "how do i study code",    "how do i learn",        "i learn python",
      "how can i do best",
  };
  std::vector<std::pair<std::string, std::vector<double>>> vectors = {
      {"how", {0.1, 0.9, 0.0}},   {"can", {0.2, 0.8, 0.1}},   {"i", {0.0, 1.0, 0.1}},
      {"learn", {1.0, 0.1, 0.0}}, {"study", {0.95, 0.2, 0.05}}, {"python", {0.0, 0.1, 1.0}},
      {"code", {0.1, 0.0, 0.9}},  {"do", {0.2, 0.7, 0.2}},    {"best", {0.5, 0.5, 0.0}},
      {"way", {0.6, 0.3, 0.1}},
  };
  return make_world(corpus, order, vectors);
}

// Random sentences over `words`, lengths in [lo, hi].
inline std::vector<std::string> random_lines(std::mt19937_64& rng, const std::vector<std::string>& words,
                                             std::size_t count, std::size_t lo, std::size_t hi) {
  std::vector<std::string> out;
  std::uniform_int_distribution<std::size_t> len(lo, hi), pick(0, words.size() - 1);
  for (std::size_t i = 0; i < count; ++i) {
    std::string line;
    const std::size_t n = len(rng);
    for (std::size_t j = 0; j < n; ++j) {
      if (j) line += ' ';
      line += words[pick(rng)];
    }
    out.push_back(line);
  }
  return out;
}

inline oracle::Words words_of(const upsa::Sentence& s) {
  oracle::Words out;
  for (const auto& t : s) out.push_back(t.surface);
  return out;
}

}  // namespace fixtures
