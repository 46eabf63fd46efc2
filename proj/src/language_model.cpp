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

#include "upsa/language_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace upsa {

const char* direction_name(Direction d) {
  return d == Direction::kForward ? "forward" : "backward";
}

std::vector<TokenId> LanguageModel::padded_reading_order(
    std::span<const TokenId> ids) const {
  const std::size_t pad = static_cast<std::size_t>(order() - 1);
  std::vector<TokenId> out(pad, kBosId);
  out.reserve(pad + ids.size() + 1);
  if (direction() == Direction::kForward) {
    out.insert(out.end(), ids.begin(), ids.end());
  } else {
    out.insert(out.end(), ids.rbegin(), ids.rend());
  }
  out.push_back(kEosId);
  return out;
}

std::vector<double> LanguageModel::position_logprobs(
    std::span<const TokenId> ids) const {
  const auto padded = padded_reading_order(ids);
  const std::size_t pad = static_cast<std::size_t>(order() - 1);
  std::vector<double> out;
  out.reserve(padded.size() - pad);
  for (std::size_t j = pad; j < padded.size(); ++j) {
    std::span<const TokenId> ctx(padded.data() + j - pad, pad);
    out.push_back(std::log(word_prob(ctx, padded[j])));
  }
  return out;
}

double LanguageModel::sequence_logprob(const Sentence& s) const {
  const auto ids = s.ids();
  double total = 0.0;
  for (double lp : position_logprobs(ids)) total += lp;
  return total;
}

std::vector<double> LanguageModel::distribution(
    std::span<const TokenId> context) const {
  std::vector<double> out(vocabulary().size());
  for (TokenId w = 0; w < out.size(); ++w) out[w] = word_prob(context, w);
  return out;
}

std::vector<std::pair<TokenId, double>> LanguageModel::topk_continuations(
    std::span<const TokenId> context, std::size_t k) const {
  const auto dist = distribution(context);
  std::vector<TokenId> ids;
  ids.reserve(dist.size());
  for (TokenId w = 0; w < dist.size(); ++w) {
    if (w != kBosId) ids.push_back(w);
  }
  k = std::min(k, ids.size());
  auto better = [&](TokenId a, TokenId b) {
    return dist[a] != dist[b] ? dist[a] > dist[b] : a < b;
  };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                    ids.end(), better);
  std::vector<std::pair<TokenId, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(ids[i], dist[ids[i]]);
  return out;
}

}  // namespace upsa
