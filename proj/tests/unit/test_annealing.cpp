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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"
#include "upsa/annealing.hpp"
#include "upsa/keywords.hpp"

using namespace upsa;

namespace {

const auto kStop = StopwordList::english();

TEST(Schedule, DefaultTemperatures) {
  const AnnealingSchedule s;
  EXPECT_EQ(temperature(s, 0), 0.03);
  EXPECT_EQ(temperature(s, 50), 0.015);
  EXPECT_EQ(temperature(s, 100), 0.0);
  EXPECT_EQ(temperature(s, 1000), 0.0);
  AnnealingSchedule fixed;
  fixed.fixed = true;
  EXPECT_EQ(temperature(fixed, 500), 0.03);
}

TEST(Schedule, Validation) {
  AnnealingSchedule s;
  s.t_init = -1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.t_init = 0.1;
  s.c_rate = std::nan("");
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Acceptance, Examples) {
  EXPECT_EQ(acceptance_prob(0.5, 0.4, 0.03), 1.0);
  EXPECT_NEAR(acceptance_prob(0.47, 0.5, 0.03), 0.36788, 1e-5);
  EXPECT_EQ(acceptance_prob(0.4, 0.5, 0.0), 0.0);
  EXPECT_EQ(acceptance_prob(0.5, 0.5, 0.0), 1.0);
  EXPECT_EQ(acceptance_prob(0.0, 0.0, 0.0), 1.0);
}

TEST(Acceptance, MonotoneInTemperature) {
  double prev = 0.0;
  for (double t : {0.001, 0.01, 0.03, 0.1, 1.0}) {
    const double p = acceptance_prob(0.2, 0.25, t);
    EXPECT_GT(p, prev);
    EXPECT_LE(p, 1.0);
    prev = p;
  }
}

struct Search {
  fixtures::World world = fixtures::toy_world();
  Sentence source = world.sentence("how can i learn python");
  Objective objective{source, *world.forward, world.embeddings, extract_keywords(source, kStop)};
  CandidateGenerator generator{*world.forward, *world.backward};

  SearchResult run_with(std::uint64_t seed, AnnealingSchedule sched, const RunOptions& opt = {}) {
    Rng rng(seed);
    return upsa::run(source, objective, generator, sched, rng, opt);
  }
};

TEST(Run, ZeroIterationsReturnsInput) {
  Search s;
  AnnealingSchedule sched;
  sched.iterations = 0;
  const auto r = s.run_with(1, sched);
  EXPECT_EQ(r.best, s.source);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Run, AlwaysRejectingKeepsInput) {
  Search s;
  RunOptions opt;
  opt.acceptance_draw = [] { return 1.0; };
  const auto r = s.run_with(2, {}, opt);
  EXPECT_EQ(r.best, s.source);
  ASSERT_EQ(r.trace.size(), 100u);
  for (const auto& step : r.trace) EXPECT_FALSE(step.accepted);
}

TEST(Run, DeterministicForSeed) {
  Search s;
  const auto a = s.run_with(3, {});
  const auto b = s.run_with(3, {});
  EXPECT_EQ(a.best, b.best);
  std::ostringstream ta, tb;
  write_trace_jsonl(ta, a.trace, 0);
  write_trace_jsonl(tb, b.trace, 0);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Run, BestOfTrace) {
  Search s;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = s.run_with(seed, {});
    EXPECT_GE(r.best_score.log_total, s.objective.score(s.source).log_total);
    EXPECT_EQ(r.best_score.log_total, s.objective.score(r.best).log_total);
    for (const auto& step : r.trace) EXPECT_LE(step.current_log_total, r.best_score.log_total);
    // The returned sentence was visited: some accepted step reaches its score,
    // or it is the input itself.
    bool visited = r.best == s.source;
    for (const auto& step : r.trace) visited |= step.accepted && step.current_log_total == r.best_score.log_total;
    EXPECT_TRUE(visited);
  }
}

TEST(Run, TraceRecordsSchedule) {
  Search s;
  AnnealingSchedule sched;
  sched.iterations = 150;
  const auto r = s.run_with(4, sched);
  ASSERT_EQ(r.trace.size(), 150u);
  for (const auto& step : r.trace) {
    EXPECT_EQ(step.temperature, temperature(sched, step.t));
    EXPECT_GE(step.accept_prob, 0.0);
    EXPECT_LE(step.accept_prob, 1.0);
    if (step.op == EditOp::kDelete) {
      EXPECT_TRUE(step.word.empty());
    }
  }
}

TEST(Run, GreedyNeverAcceptsWorse) {
  Search s;
  AnnealingSchedule sched;
  sched.t_init = 0;
  sched.c_rate = 0;
  sched.iterations = 200;
  const auto r = s.run_with(5, sched);
  double prev = s.objective.score(s.source).log_total;
  for (const auto& step : r.trace) {
    EXPECT_GE(step.current_log_total, prev);
    prev = step.current_log_total;
  }
}

TEST(Trace, JsonLines) {
  Search s;
  AnnealingSchedule sched;
  sched.iterations = 10;
  const auto r = s.run_with(6, sched);
  std::ostringstream out;
  write_trace_jsonl(out, r.trace, 7);
  std::istringstream in(out.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["line"], 7);
    EXPECT_EQ(j["t"], n);
    EXPECT_TRUE(j.contains("op"));
    EXPECT_TRUE(j.contains("accepted"));
    ++n;
  }
  EXPECT_EQ(n, 10u);
}

}  // namespace
