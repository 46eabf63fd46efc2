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
#include <string>
#include <vector>

#include "upsa/text.hpp"

namespace upsa {

struct BleuConfig {
  int max_order = 4;
  // Add one to matches and totals of orders >= 2 whenever some order has no
  // raw match. A zero unigram match still yields 0.
  bool smoothing = true;
};

struct IbleuConfig {
  double alpha = 0.9;
};

enum class RougeVariant { kRecall, kF1 };

// Sentence-level BLEU against one or more references (n-grams compared by
// surface). Clipping takes the maximum count over references; the brevity
// penalty uses the reference length closest to the candidate's (shorter on
// ties). Throws std::invalid_argument for no references or a bad max order.
double sentence_bleu(const Sentence& candidate, std::span<const Sentence> references,
                     const BleuConfig& cfg = {});

// alpha * BLEU(candidate, references) - (1 - alpha) * BLEU(candidate, [source]).
double ibleu(const Sentence& candidate, std::span<const Sentence> references,
             const Sentence& source, const IbleuConfig& cfg = {},
             const BleuConfig& bleu = {});

// ROUGE-N. Throws UndefinedMetric when the reference has fewer than n tokens.
double rouge_n(const Sentence& candidate, const Sentence& reference, int n,
               RougeVariant variant = RougeVariant::kRecall);

struct EvalCase {
  Sentence source;
  Sentence candidate;
  std::vector<Sentence> references;
};

struct MetricReport {
  std::size_t cases = 0;
  double bleu = 0.0;
  double ibleu = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
};

struct ReportConfig {
  BleuConfig bleu;
  IbleuConfig ibleu;
  RougeVariant rouge = RougeVariant::kRecall;
};

// Arithmetic means of the sentence-level scores. ROUGE-N of a case is the
// maximum over its references. Throws std::invalid_argument when empty.
MetricReport corpus_report(std::span<const EvalCase> cases, const ReportConfig& cfg = {});

// One `name value` line per metric, values with four decimals.
std::string format_report(const MetricReport& report);

}  // namespace upsa
