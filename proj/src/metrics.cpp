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

#include "upsa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "upsa/errors.hpp"

namespace upsa {
namespace {

bool same_ngram(std::span<const Token> a, std::size_t i, std::span<const Token> b,
                std::size_t j, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (a[i + k].surface != b[j + k].surface) return false;
  }
  return true;
}

std::size_t ngram_total(std::size_t length, std::size_t n) {
  return length >= n ? length - n + 1 : 0;
}

// Occurrences in `hay` of the n-gram starting at `src[i]`.
std::size_t occurrences(std::span<const Token> hay, std::span<const Token> src,
                        std::size_t i, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < ngram_total(hay.size(), n); ++j) {
    if (same_ngram(hay, j, src, i, n)) ++c;
  }
  return c;
}

bool seen_before(std::span<const Token> s, std::size_t i, std::size_t n) {
  for (std::size_t j = 0; j < i; ++j) {
    if (same_ngram(s, j, s, i, n)) return true;
  }
  return false;
}

// Clipped matches of `candidate` n-grams against the references.
std::size_t clipped_matches(std::span<const Token> candidate,
                            std::span<const Sentence> references, std::size_t n) {
  std::size_t matches = 0;
  for (std::size_t i = 0; i < ngram_total(candidate.size(), n); ++i) {
    if (seen_before(candidate, i, n)) continue;
    std::size_t ref_max = 0;
    for (const auto& r : references) {
      ref_max = std::max(ref_max, occurrences(r.tokens(), candidate, i, n));
    }
    matches += std::min(occurrences(candidate, candidate, i, n), ref_max);
  }
  return matches;
}

}  // namespace

double sentence_bleu(const Sentence& candidate, std::span<const Sentence> references,
                     const BleuConfig& cfg) {
  if (references.empty()) throw std::invalid_argument("BLEU needs at least one reference");
  if (cfg.max_order < 1 || cfg.max_order > 4) {
    throw std::invalid_argument("BLEU max order must be in [1, 4]");
  }
  const auto order = static_cast<std::size_t>(cfg.max_order);
  std::vector<double> matches(order), totals(order);
  bool any_zero = false;
  for (std::size_t n = 1; n <= order; ++n) {
    matches[n - 1] = static_cast<double>(clipped_matches(candidate.tokens(), references, n));
    totals[n - 1] = static_cast<double>(ngram_total(candidate.size(), n));
    any_zero = any_zero || matches[n - 1] == 0.0;
  }
  if (matches[0] == 0.0) return 0.0;

  double log_precision = 0.0;
  for (std::size_t n = 1; n <= order; ++n) {
    double m = matches[n - 1], t = totals[n - 1];
    if (n >= 2 && any_zero) {
      if (!cfg.smoothing) return 0.0;
      m += 1.0;
      t += 1.0;
    }
    log_precision += std::log(m / t);
  }
  log_precision /= static_cast<double>(order);

  const double c = static_cast<double>(candidate.size());
  double r = static_cast<double>(references[0].size());
  for (const auto& ref : references) {
    const double len = static_cast<double>(ref.size());
    const double d = std::abs(len - c), best = std::abs(r - c);
    if (d < best || (d == best && len < r)) r = len;
  }
  const double log_bp = c >= r ? 0.0 : 1.0 - r / c;
  return std::exp(log_precision + log_bp);
}

double ibleu(const Sentence& candidate, std::span<const Sentence> references,
             const Sentence& source, const IbleuConfig& cfg, const BleuConfig& bleu) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw std::invalid_argument("iBLEU alpha must be in [0, 1]");
  }
  const double ref_bleu = sentence_bleu(candidate, references, bleu);
  const double src_bleu = sentence_bleu(candidate, std::span<const Sentence>(&source, 1), bleu);
  return cfg.alpha * ref_bleu - (1.0 - cfg.alpha) * src_bleu;
}

double rouge_n(const Sentence& candidate, const Sentence& reference, int n,
               RougeVariant variant) {
  if (n < 1) throw std::invalid_argument("ROUGE order must be positive");
  const auto un = static_cast<std::size_t>(n);
  if (reference.size() < un) {
    throw UndefinedMetric("ROUGE-" + std::to_string(n) + " undefined for a reference of " +
                          std::to_string(reference.size()) + " tokens");
  }
  // Clipped overlap is symmetric, so count it from the reference side.
  const std::size_t overlap = clipped_matches(reference.tokens(), std::span(&candidate, 1), un);
  const double recall = static_cast<double>(overlap) /
                        static_cast<double>(ngram_total(reference.size(), un));
  if (variant == RougeVariant::kRecall) return recall;
  const std::size_t cand_total = ngram_total(candidate.size(), un);
  if (overlap == 0 || cand_total == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
  return 2.0 * precision * recall / (precision + recall);
}

MetricReport corpus_report(std::span<const EvalCase> cases, const ReportConfig& cfg) {
  if (cases.empty()) throw std::invalid_argument("evaluation set is empty");
  MetricReport report;
  report.cases = cases.size();
  std::size_t r1_cases = 0, r2_cases = 0;
  for (const auto& c : cases) {
    report.bleu += sentence_bleu(c.candidate, c.references, cfg.bleu);
    report.ibleu += ibleu(c.candidate, c.references, c.source, cfg.ibleu, cfg.bleu);
    for (int n : {1, 2}) {
      double best = -1.0;
      for (const auto& ref : c.references) {
        if (ref.size() < static_cast<std::size_t>(n)) continue;
        best = std::max(best, rouge_n(c.candidate, ref, n, cfg.rouge));
      }
      if (best < 0.0) continue;  // every reference too short
      (n == 1 ? report.rouge1 : report.rouge2) += best;
      ++(n == 1 ? r1_cases : r2_cases);
    }
  }
  const double total = static_cast<double>(cases.size());
  report.bleu /= total;
  report.ibleu /= total;
  report.rouge1 = r1_cases ? report.rouge1 / static_cast<double>(r1_cases) : 0.0;
  report.rouge2 = r2_cases ? report.rouge2 / static_cast<double>(r2_cases) : 0.0;
  return report;
}

std::string format_report(const MetricReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "cases %zu\nBLEU %.4f\niBLEU %.4f\nROUGE-1 %.4f\nROUGE-2 %.4f\n",
                report.cases, report.bleu, report.ibleu, report.rouge1, report.rouge2);
  return buf;
}

}  // namespace upsa
