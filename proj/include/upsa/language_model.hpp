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
#include <utility>
#include <vector>

#include "upsa/text.hpp"

namespace upsa {

enum class Direction : std::uint8_t { kForward = 0, kBackward = 1 };

const char* direction_name(Direction d);

// Word-level scorer used for fluency and for top-K proposal vocabularies.
//
// Contexts are given in the model's reading order with the most recent token
// last: for a Backward model "most recent" means the token immediately to the
// right of the predicted position. Sentences are padded with order() - 1 BOS
// tokens and terminated by one EOS.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual int order() const = 0;
  virtual Direction direction() const = 0;
  virtual const Vocabulary& vocabulary() const = 0;

  // p(w | context), strictly positive for every vocabulary id. Only the last
  // order() - 1 context tokens are used.
  virtual double word_prob(std::span<const TokenId> context, TokenId w) const = 0;

  // Natural-log probability of `s` read in this model's direction (Backward
  // models reverse internally), including the EOS prediction.
  virtual double sequence_logprob(const Sentence& s) const;

  // The k most probable ids excluding BOS, descending, ties by ascending id.
  virtual std::vector<std::pair<TokenId, double>> topk_continuations(
      std::span<const TokenId> context, std::size_t k) const;

  // p(w | context) for every id in the vocabulary. The default implementation
  // calls word_prob once per id.
  virtual std::vector<double> distribution(std::span<const TokenId> context) const;

  // `ids` reversed for Backward models, BOS-padded and EOS-terminated.
  std::vector<TokenId> padded_reading_order(std::span<const TokenId> ids) const;

  // Per-position log-probabilities of padded_reading_order(ids): entry j is
  // the log-probability of the (j+1)-th predicted token.
  std::vector<double> position_logprobs(std::span<const TokenId> ids) const;
};

}  // namespace upsa
