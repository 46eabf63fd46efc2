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

#include "upsa/annealing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace upsa {

void AnnealingSchedule::validate() const {
  if (!std::isfinite(t_init) || t_init < 0.0 || !std::isfinite(c_rate) || c_rate < 0.0) {
    throw std::invalid_argument("annealing parameters must be finite and non-negative");
  }
}

double temperature(const AnnealingSchedule& sched, std::size_t t) {
  if (sched.fixed) return sched.t_init;
  return std::max(0.0, sched.t_init - sched.c_rate * static_cast<double>(t));
}

double acceptance_prob(double f_new, double f_old, double temperature) {
  if (f_new >= f_old) return 1.0;
  if (temperature <= 0.0) return 0.0;
  return std::min(1.0, std::exp((f_new - f_old) / temperature));
}

SearchResult run(const Sentence& source, const Objective& objective,
                 const CandidateGenerator& generator, const AnnealingSchedule& sched,
                 Rng& rng, const RunOptions& options) {
  sched.validate();
  Sentence current = source;
  ScoreBreakdown current_score = objective.score(current);
  FluencyTerms current_fluency = objective.fluency_terms(current);

  SearchResult result{source, current_score, {}};
  result.trace.reserve(sched.iterations);
  CandidateVocab vocab;

  for (std::size_t t = 0; t < sched.iterations; ++t) {
    const double temp = temperature(sched, t);
    Proposal proposal = generator.propose(current, current_score, current_fluency, objective,
                                          rng, options.observer ? &vocab : nullptr);
    if (options.observer) options.observer(t, proposal, vocab);

    const double f_new = proposal.candidate_score.value();
    const double f_old = current_score.value();
    const double p = acceptance_prob(f_new, f_old, temp);
    const double u = options.acceptance_draw ? options.acceptance_draw() : rng.uniform();
    const bool accepted = u < p;

    TraceStep step;
    step.t = t;
    step.temperature = temp;
    step.op = proposal.edit.op;
    step.position = proposal.edit.position;
    if (proposal.edit.word) step.word = proposal.edit.word->surface;
    step.identity = proposal.identity;
    step.delta_f = f_new - f_old;
    step.accept_prob = p;
    step.accepted = accepted;

    if (accepted) {
      current = std::move(proposal.candidate);
      current_score = proposal.candidate_score;
      current_fluency = std::move(proposal.fluency);
      if (current_score.log_total > result.best_score.log_total) {
        result.best = current;
        result.best_score = current_score;
      }
    }
    step.current_log_total = current_score.log_total;
    result.trace.push_back(std::move(step));
  }
  return result;
}

void write_trace_jsonl(std::ostream& out, const SearchTrace& trace, std::size_t line_index) {
  for (const auto& s : trace) {
    nlohmann::ordered_json j;
    j["line"] = line_index;
    j["t"] = s.t;
    j["temperature"] = s.temperature;
    j["op"] = edit_op_name(s.op);
    j["position"] = s.position;
    j["word"] = s.word;
    j["identity"] = s.identity;
    j["delta_f"] = s.delta_f;
    j["accept_prob"] = s.accept_prob;
    j["accepted"] = s.accepted;
    if (std::isfinite(s.current_log_total)) {
      j["current_log_total"] = s.current_log_total;
    } else {
      j["current_log_total"] = nullptr;
    }
    out << j.dump() << '\n';
  }
}

}  // namespace upsa
