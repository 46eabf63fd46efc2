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

#include "upsa/candidate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "upsa/errors.hpp"

namespace upsa {

const char* edit_op_name(EditOp op) {
  switch (op) {
    case EditOp::kReplace:
      return "replace";
    case EditOp::kInsert:
      return "insert";
    case EditOp::kDelete:
      return "delete";
  }
  return "unknown";
}

std::size_t first_changed_index(const Edit& edit) {
  return edit.op == EditOp::kInsert ? edit.position : edit.position - 1;
}

Sentence apply_edit(const Sentence& s, const Edit& edit) {
  if (edit.word.has_value() == (edit.op == EditOp::kDelete)) {
    throw std::invalid_argument("a word is required exactly for replace and insert");
  }
  const std::size_t l = s.size();
  const std::size_t k = edit.position;
  std::vector<Token> out(s.begin(), s.end());
  switch (edit.op) {
    case EditOp::kReplace:
      if (k < 1 || k > l) throw PositionError("replace position out of range");
      out[k - 1] = *edit.word;
      break;
    case EditOp::kInsert:
      if (k > l) throw PositionError("insert position out of range");
      out.insert(out.begin() + static_cast<std::ptrdiff_t>(k), *edit.word);
      break;
    case EditOp::kDelete:
      if (k < 1 || k > l) throw PositionError("delete position out of range");
      if (l == 1) throw PositionError("cannot delete the only token");
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(k - 1));
      break;
  }
  return Sentence(std::move(out));
}

Sentence apply_edit(const Sentence& s, EditOp op, std::size_t position,
                    std::optional<Token> word) {
  return apply_edit(s, Edit{op, position, std::move(word)});
}

CandidateVocab topk_vocab(const Sentence& current, EditOp op, std::size_t position,
                          const LanguageModel& forward, const LanguageModel& backward,
                          std::size_t k, const Sentence* copy_source) {
  if (op == EditOp::kDelete) throw std::invalid_argument("delete has no word vocabulary");
  const std::size_t l = current.size();
  if (op == EditOp::kReplace ? (position < 1 || position > l) : position > l) {
    throw PositionError("vocabulary position out of range");
  }
  // Tokens [0, left_end) precede the new word, [right_begin, l) follow it.
  const std::size_t left_end = op == EditOp::kReplace ? position - 1 : position;
  const std::size_t right_begin = position;

  const auto ids = current.ids();
  std::vector<TokenId> fwd_ctx(static_cast<std::size_t>(forward.order() - 1), kBosId);
  fwd_ctx.insert(fwd_ctx.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(left_end));
  std::vector<TokenId> bwd_ctx(static_cast<std::size_t>(backward.order() - 1), kBosId);
  bwd_ctx.insert(bwd_ctx.end(), ids.rbegin(),
                 ids.rbegin() + static_cast<std::ptrdiff_t>(l - right_begin));

  const auto pf = forward.distribution(fwd_ctx);
  const auto pb = backward.distribution(bwd_ctx);
  std::vector<double> score(pf.size());
  std::vector<TokenId> words;
  for (TokenId w = 0; w < pf.size(); ++w) {
    if (w == kUnkId || w == kBosId || w == kEosId) continue;
    score[w] = pf[w] * pb[w];
    words.push_back(w);
  }
  k = std::min(k, words.size());
  std::partial_sort(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(k), words.end(),
                    [&](TokenId a, TokenId b) {
                      return score[a] != score[b] ? score[a] > score[b] : a < b;
                    });

  const auto& vocab = forward.vocabulary();
  CandidateVocab out;
  out.reserve(k + (copy_source ? copy_source->size() : 0));
  for (std::size_t i = 0; i < k; ++i) out.push_back(Token{vocab.surface(words[i]), words[i]});
  if (copy_source) {
    for (const auto& t : *copy_source) {
      const bool present = std::any_of(out.begin(), out.end(),
                                       [&](const Token& o) { return o.surface == t.surface; });
      if (!present) out.push_back(t);
    }
  }
  return out;
}

WordSample sample_word(std::span<const Token> vocab, const Sentence& current,
                       const FluencyTerms& current_fluency, EditOp op, std::size_t position,
                       const Objective& objective, Rng& rng) {
  if (vocab.empty()) throw std::invalid_argument("empty candidate vocabulary");
  std::vector<WordSample> samples;
  samples.reserve(vocab.size());
  double best = kLogZero;
  for (const auto& w : vocab) {
    Edit edit{op, position, w};
    Sentence candidate = apply_edit(current, edit);
    FluencyTerms fluency;
    ScoreBreakdown score = objective.score_edit(candidate, current_fluency, edit, &fluency);
    best = std::max(best, score.log_total);
    samples.push_back({w, std::move(candidate), score, std::move(fluency)});
  }

  std::size_t chosen = 0;
  if (best == kLogZero) {
    chosen = rng.index(samples.size());
  } else {
    // Shifting by the maximum leaves numerator / Z unchanged and avoids
    // underflow when every f is tiny.
    std::vector<double> weights;
    weights.reserve(samples.size());
    double z = 0.0;
    for (const auto& s : samples) {
      weights.push_back(std::exp(s.score.log_total - best));
      z += weights.back();
    }
    const double u = rng.uniform() * z;
    double acc = 0.0;
    chosen = samples.size() - 1;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      acc += weights[i];
      if (u < acc) {
        chosen = i;
        break;
      }
    }
    // Never land on a zero-weight tail entry through rounding.
    while (weights[chosen] == 0.0 && chosen > 0) --chosen;
  }
  return std::move(samples[chosen]);
}

CandidateGenerator::CandidateGenerator(const LanguageModel& forward,
                                       const LanguageModel& backward, GeneratorConfig cfg)
    : forward_(forward), backward_(backward), cfg_(cfg) {
  if (forward.direction() != Direction::kForward || backward.direction() != Direction::kBackward) {
    throw std::invalid_argument("expected a forward and a backward language model");
  }
  if (!(forward.vocabulary() == backward.vocabulary())) {
    throw std::invalid_argument("forward and backward models use different vocabularies");
  }
  if (cfg_.top_k < 1) throw std::invalid_argument("top-k must be at least 1");
  if (cfg_.max_length != 0 && cfg_.max_length < cfg_.min_length) {
    throw std::invalid_argument("max_length must not be below min_length");
  }
}

Proposal CandidateGenerator::propose(const Sentence& current, const ScoreBreakdown& current_score,
                                     const FluencyTerms& current_fluency,
                                     const Objective& objective, Rng& rng,
                                     CandidateVocab* vocab_out) const {
  const std::size_t l = current.size();
  const auto op = static_cast<EditOp>(rng.index(3));
  std::size_t position = 0;
  switch (op) {
    case EditOp::kReplace:
    case EditOp::kDelete:
      position = 1 + rng.index(l);
      break;
    case EditOp::kInsert:
      position = rng.index(l + 1);
      break;
  }
  if (vocab_out) vocab_out->clear();

  const bool blocked =
      (op == EditOp::kDelete && l - 1 < std::max<std::size_t>(cfg_.min_length, 1)) ||
      (op == EditOp::kInsert && cfg_.max_length != 0 && l + 1 > cfg_.max_length);
  if (blocked) {
    return Proposal{Edit{op, position, std::nullopt}, current, current_score, current_fluency,
                    true, 0};
  }
  if (op == EditOp::kDelete) {
    Edit edit{op, position, std::nullopt};
    Sentence candidate = apply_edit(current, edit);
    FluencyTerms fluency;
    ScoreBreakdown score = objective.score_edit(candidate, current_fluency, edit, &fluency);
    return Proposal{std::move(edit), std::move(candidate), score, std::move(fluency), false, 0};
  }

  CandidateVocab vocab = topk_vocab(current, op, position, forward_, backward_, cfg_.top_k,
                                    cfg_.copy ? &objective.source() : nullptr);
  WordSample pick = sample_word(vocab, current, current_fluency, op, position, objective, rng);
  const std::size_t vocab_size = vocab.size();
  if (vocab_out) *vocab_out = std::move(vocab);
  return Proposal{Edit{op, position, std::move(pick.word)}, std::move(pick.candidate), pick.score,
                  std::move(pick.fluency), false, vocab_size};
}

}  // namespace upsa
