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
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "upsa/annealing.hpp"
#include "upsa/candidate.hpp"
#include "upsa/embeddings.hpp"
#include "upsa/keywords.hpp"
#include "upsa/metrics.hpp"
#include "upsa/ngram_model.hpp"
#include "upsa/objective.hpp"

namespace upsa {

// Everything a CLI invocation needs. Defaults are the validated settings:
// P=8, Q=1, S=1, T_init=0.03, C=3e-4, N=100, K=50.
struct RunConfig {
  std::string corpus;
  std::string embeddings;
  std::string stopwords;  // empty: built-in English list
  std::string lm_dir;
  std::string input;
  std::string output;
  std::string trace;

  int order = 3;
  double discount = NgramModel::kDefaultDiscount;
  std::size_t min_count = 1;

  double p = 8.0;
  double q = 1.0;
  double s = 1.0;
  double t_init = 3e-2;
  double c_rate = 3e-4;
  std::size_t iters = 100;
  std::size_t topk = 50;
  std::size_t min_length = 3;
  std::size_t max_length = 0;
  std::size_t max_keywords = 5;
  double alpha = 0.9;
  std::uint64_t seed = 42;
  std::size_t threads = 0;  // 0: hardware concurrency

  bool fixed_temp = false;
  bool no_copy = false;
  bool no_sem_key = false;
  bool no_sem_sen = false;
  bool no_exp = false;
  bool raw_fluency = false;

  std::vector<double> t_inits = {0.0, 0.005, 0.01, 0.03, 0.05, 0.07, 0.09, 0.11, 0.15, 0.21};

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
  ObjectiveConfig objective() const;
  GeneratorConfig generator() const;
  AnnealingSchedule schedule() const;
};

// Overwrites the fields named in `j` (keys match the CLI flag names with
// dashes, e.g. "t-init"). Unknown keys raise FormatError.
void apply_config(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

inline constexpr const char* kForwardModelFile = "forward.lm";
inline constexpr const char* kBackwardModelFile = "backward.lm";
inline constexpr const char* kVocabularyFile = "vocab.txt";

std::vector<std::string> read_lines(const std::filesystem::path& path);

struct TrainStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t vocabulary = 0;  // including reserved entries
};

// Builds the vocabulary and both models in memory, then writes them to
// cfg.lm_dir. Nothing is written unless every step succeeds.
TrainStats train_language_models(const RunConfig& cfg);

struct Models {
  std::shared_ptr<const NgramModel> forward;
  std::shared_ptr<const NgramModel> backward;
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const StopwordList> stopwords;
};

Models load_models(const RunConfig& cfg);

struct ParaphraseResult {
  Sentence sentence;
  ScoreBreakdown score;
  SearchTrace trace;
};

// One search from `source` with its own generator seeded by `seed`.
ParaphraseResult paraphrase_sentence(const Models& models, const RunConfig& cfg,
                                     const Sentence& source, std::uint64_t seed,
                                     const RunOptions& options = {});

// Paraphrases every line; line i uses derive_seed(cfg.seed, i). Blank lines
// yield an empty optional. Output order follows input order.
std::vector<std::optional<ParaphraseResult>> paraphrase_lines(const Models& models,
                                                              const RunConfig& cfg,
                                                              std::span<const std::string> lines);

// `source<TAB>candidate<TAB>reference...`; FormatError names the line.
std::vector<EvalCase> read_eval_tsv(std::istream& in);

struct ReferenceCase {
  Sentence source;
  std::vector<Sentence> references;
};

// `source<TAB>reference...`; FormatError names the line.
std::vector<ReferenceCase> read_reference_tsv(std::istream& in);

struct SweepRow {
  double t_init = 0.0;
  double mean_ibleu = 0.0;
  double mean_bleu = 0.0;
  double mean_objective = 0.0;  // mean f of the returned sentences
};

// One paraphrase + evaluate pass per initial temperature. Each row anneals
// to zero over the iteration budget (C = T_init / N).
std::vector<SweepRow> temperature_sweep(const Models& models, const RunConfig& cfg,
                                        std::span<const ReferenceCase> cases,
                                        std::span<const double> t_inits);

std::string format_sweep(std::span<const SweepRow> rows);

}  // namespace upsa
