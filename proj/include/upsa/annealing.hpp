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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "upsa/candidate.hpp"
#include "upsa/objective.hpp"
#include "upsa/random.hpp"
#include "upsa/text.hpp"

namespace upsa {

struct AnnealingSchedule {
  double t_init = 3e-2;
  double c_rate = 3e-4;
  std::size_t iterations = 100;
  // Hold T at t_init for the whole run (the no-annealing ablation).
  bool fixed = false;

  // Throws std::invalid_argument for t_init < 0, c_rate < 0 or non-finite values.
  void validate() const;
};

// max(0, t_init - c_rate * t), or t_init when the schedule is fixed.
double temperature(const AnnealingSchedule& sched, std::size_t t);

// min(1, exp((f_new - f_old) / T)) on raw objective values. At T = 0 the
// proposal is accepted iff f_new >= f_old.
double acceptance_prob(double f_new, double f_old, double temperature);

struct TraceStep {
  std::size_t t = 0;
  double temperature = 0.0;
  EditOp op = EditOp::kReplace;
  std::size_t position = 0;
  std::string word;  // empty for Delete
  bool identity = false;
  double delta_f = 0.0;
  double accept_prob = 0.0;
  bool accepted = false;
  double current_log_total = 0.0;  // after the step
};

using SearchTrace = std::vector<TraceStep>;

struct SearchResult {
  Sentence best;
  ScoreBreakdown best_score;
  SearchTrace trace;
};

struct RunOptions {
  // Called with every Replace/Insert vocabulary before sampling.
  std::function<void(std::size_t t, const Proposal&, const CandidateVocab&)> observer;
  // Replaces the uniform draw used for the acceptance decision (accept iff
  // draw < probability). Test seam.
  std::function<double()> acceptance_draw;
};

// Runs sched.iterations steps from `source`. The returned sentence is the
// highest-scoring one accepted during the run, or `source` if none improved
// on it.
SearchResult run(const Sentence& source, const Objective& objective,
                 const CandidateGenerator& generator, const AnnealingSchedule& sched,
                 Rng& rng, const RunOptions& options = {});

// One JSON object per line with the TraceStep fields; -inf log totals are
// written as null.
void write_trace_jsonl(std::ostream& out, const SearchTrace& trace, std::size_t line_index);

}  // namespace upsa
