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

#include "upsa/objective.hpp"

#include <algorithm>
#include <stdexcept>

#include "upsa/errors.hpp"
#include "upsa/simd/kernels.hpp"

namespace upsa {
namespace {

double safe_log(double x) { return x > 0.0 ? std::log(x) : kLogZero; }

// power * log(x) with 0 * anything = 0, so a zero power removes the factor.
double weighted(double power, double log_x) { return power == 0.0 ? 0.0 : power * log_x; }

}  // namespace

void ObjectiveConfig::validate() const {
  for (double v : {p, q, s}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("objective powers must be finite and non-negative");
    }
  }
}

Objective::Objective(Sentence source, const LanguageModel& forward,
                     const EmbeddingTable& embeddings, KeywordSet keywords,
                     ObjectiveConfig cfg)
    : source_(std::move(source)),
      forward_(forward),
      embeddings_(embeddings),
      keywords_(std::move(keywords)),
      cfg_(cfg) {
  cfg_.validate();
  if (forward_.direction() != Direction::kForward) {
    throw std::invalid_argument("fluency requires a forward language model");
  }
  source_vector_ = sentence_vector(source_, embeddings_);
  if (keywords_.empty()) return;

  const auto& vocab = forward_.vocabulary();
  vocab_cos_.resize(vocab.size());
  for (TokenId id = 0; id < vocab.size(); ++id) {
    Token t{vocab.surface(id), id};
    auto& row = vocab_cos_[id];
    row.reserve(keywords_.size());
    for (std::size_t k = 0; k < keywords_.size(); ++k) row.push_back(keyword_cosine(t, k));
  }
  for (const auto& t : source_) {
    if (!t.is_unknown() || oov_cos_.contains(t.surface)) continue;
    std::vector<double> row;
    for (std::size_t k = 0; k < keywords_.size(); ++k) row.push_back(keyword_cosine(t, k));
    oov_cos_.emplace(t.surface, std::move(row));
  }
}

double Objective::keyword_cosine(const Token& word, std::size_t keyword) const {
  const auto& kw = keywords_[keyword].token.surface;
  if (word.surface == kw) return 1.0;
  auto e = embeddings_.find(kw);
  auto w = embeddings_.find(word.surface);
  if (!e || !w) return 0.0;
  const double c = cosine_from(simd::dot(*w, *e), embeddings_.norm(word.surface),
                               embeddings_.norm(kw));
  return std::max(c, 0.0);
}

double Objective::sem_key(const Sentence& x) const {
  if (keywords_.empty()) return 1.0;
  const auto& vocab = forward_.vocabulary();
  std::vector<double> best(keywords_.size(), 0.0);
  for (const auto& t : x) {
    const std::vector<double>* row = nullptr;
    if (!t.is_unknown() && t.id < vocab.size() && vocab.surface(t.id) == t.surface) {
      row = &vocab_cos_[t.id];
    } else if (auto it = oov_cos_.find(t.surface); it != oov_cos_.end()) {
      row = &it->second;
    }
    for (std::size_t k = 0; k < keywords_.size(); ++k) {
      const double c = row ? (*row)[k] : keyword_cosine(t, k);
      best[k] = std::max(best[k], c);
    }
  }
  return *std::min_element(best.begin(), best.end());
}

double Objective::sem_sen(const Sentence& x) const {
  return std::max(cosine(sentence_vector(x, embeddings_), source_vector_), 0.0);
}

double Objective::exp_diversity(const Sentence& x) const {
  const double bleu = sentence_bleu(x, std::span<const Sentence>(&source_, 1), cfg_.bleu);
  return std::max(1.0 - bleu, 0.0);
}

double Objective::log_fluency_from_sum(double sum, std::size_t length) const {
  if (cfg_.fluency == FluencyMode::kRaw) return sum;
  return sum / static_cast<double>(length + 1);
}

double Objective::log_fluency(const Sentence& x) const {
  return log_fluency_from_sum(forward_.sequence_logprob(x), x.size());
}

ScoreBreakdown Objective::combine(const Sentence& x, double log_flu) const {
  ScoreBreakdown b;
  b.log_sem_key = cfg_.p == 0.0 ? 0.0 : safe_log(sem_key(x));
  b.log_sem_sen = cfg_.q == 0.0 ? 0.0 : safe_log(sem_sen(x));
  b.log_exp = cfg_.s == 0.0 ? 0.0 : safe_log(exp_diversity(x));
  b.log_flu = log_flu;
  b.log_total = weighted(cfg_.p, b.log_sem_key) + weighted(cfg_.q, b.log_sem_sen) +
                weighted(cfg_.s, b.log_exp) + b.log_flu;
  return b;
}

ScoreBreakdown Objective::score(const Sentence& x) const {
  return combine(x, log_fluency(x));
}

FluencyTerms Objective::fluency_terms(const Sentence& x) const {
  FluencyTerms f;
  const auto ids = x.ids();
  f.terms = forward_.position_logprobs(ids);
  f.partial.reserve(f.terms.size() + 1);
  double acc = 0.0;
  f.partial.push_back(acc);
  for (double t : f.terms) f.partial.push_back(acc += t);
  return f;
}

double Objective::fluency_term(std::span<const TokenId> padded, std::size_t j) const {
  const auto pad = static_cast<std::size_t>(forward_.order() - 1);
  return std::log(forward_.word_prob(padded.subspan(j, pad), padded[j + pad]));
}

ScoreBreakdown Objective::score_edit(const Sentence& candidate, const FluencyTerms& base,
                                     const Edit& edit, FluencyTerms* out) const {
  const auto order = static_cast<std::size_t>(forward_.order());
  const std::size_t r = first_changed_index(edit);
  const std::size_t count = candidate.size() + 1;  // tokens + EOS
  if (r >= base.partial.size() || r > count) throw PositionError("edit outside the base sentence");

  // Terms in [r, window_end) see the edit in their context window; later
  // terms equal a shifted base term.
  std::size_t window_end = r + order;
  std::ptrdiff_t shift = 0;
  switch (edit.op) {
    case EditOp::kReplace:
      break;
    case EditOp::kInsert:
      shift = -1;
      break;
    case EditOp::kDelete:
      window_end = r + order - 1;
      shift = 1;
      break;
  }
  window_end = std::min(window_end, count);

  const auto padded = forward_.padded_reading_order(candidate.ids());
  FluencyTerms local;
  FluencyTerms& f = out ? *out : local;
  f.terms.assign(base.terms.begin(), base.terms.begin() + static_cast<std::ptrdiff_t>(r));
  f.terms.reserve(count);
  for (std::size_t j = r; j < count; ++j) {
    if (j < window_end) {
      f.terms.push_back(fluency_term(padded, j));
    } else {
      f.terms.push_back(base.terms[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(j) + shift)]);
    }
  }
  f.partial.assign(base.partial.begin(), base.partial.begin() + static_cast<std::ptrdiff_t>(r) + 1);
  double acc = f.partial.back();
  for (std::size_t j = r; j < count; ++j) f.partial.push_back(acc += f.terms[j]);
  return combine(candidate, log_fluency_from_sum(acc, candidate.size()));
}

}  // namespace upsa
