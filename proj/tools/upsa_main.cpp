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

// Command-line front end: train-lm, paraphrase, evaluate, temp-sweep.
//
// Exit codes: 0 success, 1 usage error, 2 data or format error.

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "upsa/errors.hpp"
#include "upsa/pipeline.hpp"
#include "upsa/simd/kernels.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string config_path_from_argv(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw upsa::IoError("cannot write " + path);
  return out;
}

void add_model_flags(CLI::App* cmd, upsa::RunConfig& cfg) {
  cmd->add_option("--lm-dir", cfg.lm_dir, "Directory holding forward.lm, backward.lm, vocab.txt");
}

void add_search_flags(CLI::App* cmd, upsa::RunConfig& cfg) {
  cmd->add_option("--embeddings", cfg.embeddings, "Word vectors, `word v1 ... vd` per line");
  cmd->add_option("--stopwords", cfg.stopwords, "Stopword file (default: built-in English list)");
  cmd->add_option("--p", cfg.p, "Keyword similarity power (validated default 8)")->capture_default_str();
  cmd->add_option("--q", cfg.q, "Sentence similarity power (validated default 1)")->capture_default_str();
  cmd->add_option("--s", cfg.s, "Expression diversity power (validated default 1)")->capture_default_str();
  cmd->add_option("--t-init", cfg.t_init, "Initial temperature (validated default 0.03)")->capture_default_str();
  cmd->add_option("--c-rate", cfg.c_rate, "Temperature decrease per step (validated default 3e-4)")->capture_default_str();
  cmd->add_option("--iters", cfg.iters, "Search steps per sentence (validated default 100)")->capture_default_str();
  cmd->add_option("--topk", cfg.topk, "Proposal vocabulary size K (validated default 50)")->capture_default_str();
  cmd->add_option("--min-length", cfg.min_length, "Deletions never go below this length")->capture_default_str();
  cmd->add_option("--max-length", cfg.max_length, "Insertions never exceed this length (0: unbounded)")->capture_default_str();
  cmd->add_option("--max-keywords", cfg.max_keywords, "Keywords kept per input")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
  cmd->add_flag("--fixed-temp", cfg.fixed_temp, "Hold the temperature at --t-init (ablation)");
  cmd->add_flag("--no-copy", cfg.no_copy, "Disable copying source words into proposals (ablation)");
  cmd->add_flag("--no-sem-key", cfg.no_sem_key, "Drop the keyword similarity factor (ablation)");
  cmd->add_flag("--no-sem-sen", cfg.no_sem_sen, "Drop the sentence similarity factor (ablation)");
  cmd->add_flag("--no-exp", cfg.no_exp, "Drop the expression diversity factor (ablation)");
  cmd->add_flag("--raw-fluency", cfg.raw_fluency, "Use the unnormalized sentence probability");
}

int cmd_train_lm(const upsa::RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  require(cfg.lm_dir, "--lm-dir");
  cfg.validate();
  const auto stats = upsa::train_language_models(cfg);
  std::cout << "sentences " << stats.sentences << "\n"
            << "tokens " << stats.tokens << "\n"
            << "vocabulary " << stats.vocabulary << "\n"
            << "order " << cfg.order << "\n";
  return 0;
}

int cmd_paraphrase(const upsa::RunConfig& cfg) {
  require(cfg.lm_dir, "--lm-dir");
  require(cfg.embeddings, "--embeddings");
  require(cfg.input, "--input");
  require(cfg.output, "--output");
  cfg.validate();
  const auto models = upsa::load_models(cfg);
  const auto lines = upsa::read_lines(cfg.input);
  const auto results = upsa::paraphrase_lines(models, cfg, lines);

  auto out = open_output(cfg.output);
  for (const auto& r : results) out << (r ? upsa::detokenize(r->sentence) : "") << '\n';
  if (!cfg.trace.empty()) {
    auto trace = open_output(cfg.trace);
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i]) upsa::write_trace_jsonl(trace, results[i]->trace, i);
    }
  }
  return 0;
}

int cmd_evaluate(const upsa::RunConfig& cfg) {
  require(cfg.input, "--input");
  cfg.validate();
  std::ifstream in(cfg.input);
  if (!in) throw upsa::IoError("cannot open " + cfg.input);
  const auto cases = upsa::read_eval_tsv(in);
  if (cases.empty()) throw upsa::FormatError(cfg.input + ": no evaluation cases");
  upsa::ReportConfig rc;
  rc.ibleu.alpha = cfg.alpha;
  const auto text = upsa::format_report(upsa::corpus_report(cases, rc));
  std::cout << text;
  if (!cfg.output.empty()) open_output(cfg.output) << text;
  return 0;
}

int cmd_temp_sweep(const upsa::RunConfig& cfg) {
  require(cfg.lm_dir, "--lm-dir");
  require(cfg.embeddings, "--embeddings");
  require(cfg.input, "--input");
  cfg.validate();
  const auto models = upsa::load_models(cfg);
  std::ifstream in(cfg.input);
  if (!in) throw upsa::IoError("cannot open " + cfg.input);
  const auto cases = upsa::read_reference_tsv(in);
  if (cases.empty()) throw upsa::FormatError(cfg.input + ": no sweep cases");
  const auto text = upsa::format_sweep(upsa::temperature_sweep(models, cfg, cases, cfg.t_inits));
  std::cout << text;
  if (!cfg.output.empty()) open_output(cfg.output) << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  upsa::RunConfig cfg;
  try {
    if (auto path = config_path_from_argv(argc, argv); !path.empty()) cfg = upsa::load_config(path);
  } catch (const upsa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }

  CLI::App app{"Unsupervised paraphrasing by simulated annealing"};
  app.require_subcommand(1);
  // Subcommands inherit this, so --config and --simd-info work after them too.
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file of settings; flags override it");
  app.add_flag_callback("--simd-info", [] {
    std::cout << "simd " << upsa::simd::isa_name(upsa::simd::active_isa()) << "\n";
  }, "Print the active kernel instruction set");

  auto* train = app.add_subcommand("train-lm", "Train forward and backward n-gram models");
  train->add_option("--corpus", cfg.corpus, "One sentence per line");
  add_model_flags(train, cfg);
  train->add_option("--order", cfg.order, "n-gram order")->capture_default_str();
  train->add_option("--discount", cfg.discount, "Kneser-Ney discount")->capture_default_str();
  train->add_option("--min-count", cfg.min_count, "Minimum word count kept in the vocabulary")->capture_default_str();

  auto* para = app.add_subcommand("paraphrase", "Paraphrase every line of --input");
  add_model_flags(para, cfg);
  add_search_flags(para, cfg);
  para->add_option("--input", cfg.input, "Sentences, one per line");
  para->add_option("--output", cfg.output, "Paraphrases, one per line");
  para->add_option("--trace", cfg.trace, "Optional JSON-lines search trace");

  auto* eval = app.add_subcommand("evaluate", "Score source/candidate/reference TSV");
  eval->add_option("--input", cfg.input, "source<TAB>candidate<TAB>reference...");
  eval->add_option("--output", cfg.output, "Optional copy of the report");
  eval->add_option("--alpha", cfg.alpha, "iBLEU weight")->capture_default_str();

  auto* sweep = app.add_subcommand("temp-sweep", "Mean iBLEU/BLEU per initial temperature");
  add_model_flags(sweep, cfg);
  add_search_flags(sweep, cfg);
  sweep->add_option("--input", cfg.input, "source<TAB>reference...");
  sweep->add_option("--output", cfg.output, "Optional copy of the table");
  sweep->add_option("--alpha", cfg.alpha, "iBLEU weight")->capture_default_str();
  sweep->add_option("--t-inits", cfg.t_inits, "Initial temperatures")->delimiter(',')->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) return cmd_train_lm(cfg);
    if (*para) return cmd_paraphrase(cfg);
    if (*eval) return cmd_evaluate(cfg);
    if (*sweep) return cmd_temp_sweep(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const upsa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
