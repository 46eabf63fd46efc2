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
#include <span>
#include <vector>

#include "upsa/edit.hpp"
#include "upsa/language_model.hpp"
#include "upsa/objective.hpp"
#include "upsa/random.hpp"
#include "upsa/text.hpp"

namespace upsa {

struct GeneratorConfig {
  std::size_t top_k = 50;
  // A Delete that would leave fewer tokens degrades to the identity proposal.
  std::size_t min_length = 3;
  // An Insert that would exceed this degrades likewise; 0 means unbounded.
  std::size_t max_length = 0;
  // Union the source tokens into every Replace/Insert vocabulary.
  bool copy = true;
};

// Words a Replace/Insert may place, distinct by surface.
using CandidateVocab = std::vector<Token>;

// Top-K words under p_fwd(w | left context) * p_bwd(w | right context) at the
// edit position, descending with ties by id; UNK, BOS and EOS are never
// proposed. Tokens of `copy_source` (when given) are appended in order of
// appearance if not already present. The factors of the two sequence
// probabilities that do not involve w are the same for every w and are
// omitted. `op` must be Replace or Insert.
CandidateVocab topk_vocab(const Sentence& current, EditOp op, std::size_t position,
                          const LanguageModel& forward, const LanguageModel& backward,
                          std::size_t k, const Sentence* copy_source);

struct WordSample {
  Token word;
  Sentence candidate;
  ScoreBreakdown score;
  FluencyTerms fluency;
};

// Draws w with probability f(candidate_w) / Z over `vocab`, or uniformly when
// every candidate scores zero. `current_fluency` are the fluency terms of
// `current`.
WordSample sample_word(std::span<const Token> vocab, const Sentence& current,
                       const FluencyTerms& current_fluency, EditOp op, std::size_t position,
                       const Objective& objective, Rng& rng);

struct Proposal {
  Edit edit;
  Sentence candidate;
  ScoreBreakdown candidate_score;
  FluencyTerms fluency;
  // True when a length guard turned the edit into a no-op.
  bool identity = false;
  std::size_t vocab_size = 0;
};

class CandidateGenerator {
 public:
  // Throws std::invalid_argument when the models disagree on the vocabulary
  // or have the wrong directions.
  CandidateGenerator(const LanguageModel& forward, const LanguageModel& backward,
                     GeneratorConfig cfg = {});

  const GeneratorConfig& config() const { return cfg_; }

  // Samples the operation uniformly, then the position uniformly among the
  // valid ones for it. `vocab_out`, when given, receives the Replace/Insert
  // vocabulary (cleared for Delete and identity proposals).
  Proposal propose(const Sentence& current, const ScoreBreakdown& current_score,
                   const FluencyTerms& current_fluency, const Objective& objective,
                   Rng& rng, CandidateVocab* vocab_out = nullptr) const;

 private:
  const LanguageModel& forward_;
  const LanguageModel& backward_;
  GeneratorConfig cfg_;
};

}  // namespace upsa
