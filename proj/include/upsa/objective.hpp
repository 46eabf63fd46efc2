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

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "upsa/edit.hpp"
#include "upsa/embeddings.hpp"
#include "upsa/keywords.hpp"
#include "upsa/language_model.hpp"
#include "upsa/metrics.hpp"
#include "upsa/text.hpp"

namespace upsa {

enum class FluencyMode {
  // Geometric mean of the forward-LM probabilities of the l tokens and EOS.
  kNormalized,
  // Plain product of those probabilities.
  kRaw,
};

struct ObjectiveConfig {
  double p = 8.0;  // keyword similarity power
  double q = 1.0;  // sentence similarity power
  double s = 1.0;  // diversity power
  FluencyMode fluency = FluencyMode::kNormalized;
  BleuConfig bleu;

  // Throws std::invalid_argument unless every power is finite and >= 0.
  void validate() const;
};

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Natural logs of the factors. log_exp is log(1 - BLEU) before the S power.
struct ScoreBreakdown {
  double log_sem_key = 0.0;
  double log_sem_sen = 0.0;
  double log_exp = 0.0;
  double log_flu = 0.0;
  double log_total = kLogZero;

  // The raw objective value f.
  double value() const { return std::exp(log_total); }
};

// Cached forward-LM log-probabilities of one sentence. terms[j] scores token
// j (terms.back() is EOS); partial[j] is the left-to-right sum of the first
// j terms.
struct FluencyTerms {
  std::vector<double> terms;
  std::vector<double> partial;
};

// f(x) = sem_key^P * sem_sen^Q * (1 - BLEU(x, x0))^S * flu(x) for one input
// sentence x0. A power of zero drops its factor entirely (0^0 = 1), which is
// how the ablations are expressed. Immutable after construction.
class Objective {
 public:
  Objective(Sentence source, const LanguageModel& forward, const EmbeddingTable& embeddings,
            KeywordSet keywords, ObjectiveConfig cfg = {});

  const Sentence& source() const { return source_; }
  const KeywordSet& keywords() const { return keywords_; }
  const ObjectiveConfig& config() const { return cfg_; }
  const LanguageModel& forward_model() const { return forward_; }

  // min over keywords of max over words of the clamped cosine; 1 without
  // keywords. A keyword without a vector matches only its own surface.
  double sem_key(const Sentence& x) const;
  // Clamped cosine of the averaged sentence vectors.
  double sem_sen(const Sentence& x) const;
  // 1 - BLEU(x, [x0]).
  double exp_diversity(const Sentence& x) const;
  double log_fluency(const Sentence& x) const;

  ScoreBreakdown score(const Sentence& x) const;

  FluencyTerms fluency_terms(const Sentence& x) const;
  // Scores `candidate` = apply_edit(base sentence, edit) reusing the base
  // sentence's fluency terms. Bitwise identical to score(candidate).
  ScoreBreakdown score_edit(const Sentence& candidate, const FluencyTerms& base,
                            const Edit& edit, FluencyTerms* out = nullptr) const;

 private:
  double keyword_cosine(const Token& word, std::size_t keyword) const;
  double log_fluency_from_sum(double sum, std::size_t length) const;
  ScoreBreakdown combine(const Sentence& x, double log_flu) const;
  double fluency_term(std::span<const TokenId> padded, std::size_t j) const;

  Sentence source_;
  const LanguageModel& forward_;
  const EmbeddingTable& embeddings_;
  KeywordSet keywords_;
  ObjectiveConfig cfg_;
  std::vector<double> source_vector_;
  // Clamped cosine against each keyword, indexed by vocabulary id, plus a
  // table for the source's out-of-vocabulary surfaces.
  std::vector<std::vector<double>> vocab_cos_;
  std::unordered_map<std::string, std::vector<double>> oov_cos_;
};

}  // namespace upsa
