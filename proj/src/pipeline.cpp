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

#include "upsa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "upsa/errors.hpp"

namespace upsa {
namespace {

std::string line_error(std::size_t lineno, const std::string& what) {
  return "line " + std::to_string(lineno) + ": " + what;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config key '") + key + "': " + e.what());
  }
}

// Writes `bytes` next to `path` and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::vector<Sentence> split_tab_fields(const std::string& line, std::size_t lineno,
                                       const Vocabulary& vocab) {
  std::vector<Sentence> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    const std::string field = line.substr(start, tab == std::string::npos ? tab : tab - start);
    try {
      out.push_back(tokenize(field, vocab));
    } catch (const EmptyInput&) {
      throw FormatError(line_error(lineno, "empty field " + std::to_string(out.size() + 1)));
    }
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  objective().validate();
  schedule().validate();
  if (order < 1 || order > NgramModel::kMaxOrder) {
    throw std::invalid_argument("order must be in [1, 5]");
  }
  if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("discount must be in (0, 1)");
  if (min_count < 1) throw std::invalid_argument("min-count must be at least 1");
  if (topk < 1) throw std::invalid_argument("topk must be at least 1");
  if (max_keywords < 1) throw std::invalid_argument("max-keywords must be at least 1");
  if (max_length != 0 && max_length < min_length) {
    throw std::invalid_argument("max-length must not be below min-length");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in [0, 1]");
  for (double t : t_inits) {
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("sweep temperatures must be >= 0");
  }
}

ObjectiveConfig RunConfig::objective() const {
  ObjectiveConfig o;
  o.p = no_sem_key ? 0.0 : p;
  o.q = no_sem_sen ? 0.0 : q;
  o.s = no_exp ? 0.0 : s;
  o.fluency = raw_fluency ? FluencyMode::kRaw : FluencyMode::kNormalized;
  return o;
}

GeneratorConfig RunConfig::generator() const {
  return GeneratorConfig{topk, min_length, max_length, !no_copy};
}

AnnealingSchedule RunConfig::schedule() const {
  return AnnealingSchedule{t_init, c_rate, iters, fixed_temp};
}

void apply_config(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const char* k = key.c_str();
    if (key == "corpus") read_field(j, k, cfg.corpus);
    else if (key == "embeddings") read_field(j, k, cfg.embeddings);
    else if (key == "stopwords") read_field(j, k, cfg.stopwords);
    else if (key == "lm-dir") read_field(j, k, cfg.lm_dir);
    else if (key == "input") read_field(j, k, cfg.input);
    else if (key == "output") read_field(j, k, cfg.output);
    else if (key == "trace") read_field(j, k, cfg.trace);
    else if (key == "order") read_field(j, k, cfg.order);
    else if (key == "discount") read_field(j, k, cfg.discount);
    else if (key == "min-count") read_field(j, k, cfg.min_count);
    else if (key == "p") read_field(j, k, cfg.p);
    else if (key == "q") read_field(j, k, cfg.q);
    else if (key == "s") read_field(j, k, cfg.s);
    else if (key == "t-init") read_field(j, k, cfg.t_init);
    else if (key == "c-rate") read_field(j, k, cfg.c_rate);
    else if (key == "iters") read_field(j, k, cfg.iters);
    else if (key == "topk") read_field(j, k, cfg.topk);
    else if (key == "min-length") read_field(j, k, cfg.min_length);
    else if (key == "max-length") read_field(j, k, cfg.max_length);
    else if (key == "max-keywords") read_field(j, k, cfg.max_keywords);
    else if (key == "alpha") read_field(j, k, cfg.alpha);
    else if (key == "seed") read_field(j, k, cfg.seed);
    else if (key == "threads") read_field(j, k, cfg.threads);
    else if (key == "fixed-temp") read_field(j, k, cfg.fixed_temp);
    else if (key == "no-copy") read_field(j, k, cfg.no_copy);
    else if (key == "no-sem-key") read_field(j, k, cfg.no_sem_key);
    else if (key == "no-sem-sen") read_field(j, k, cfg.no_sem_sen);
    else if (key == "no-exp") read_field(j, k, cfg.no_exp);
    else if (key == "raw-fluency") read_field(j, k, cfg.raw_fluency);
    else if (key == "t-inits") read_field(j, k, cfg.t_inits);
    else throw FormatError("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  RunConfig cfg;
  try {
    apply_config(cfg, nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("config " + path.string() + ": " + e.what());
  }
  return cfg;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

TrainStats train_language_models(const RunConfig& cfg) {
  if (cfg.lm_dir.empty()) throw std::invalid_argument("--lm-dir is required");
  const auto corpus = read_lines(cfg.corpus);
  auto vocab = std::make_shared<const Vocabulary>(build_vocabulary(corpus, cfg.min_count));
  const auto forward = NgramModel::train(corpus, vocab, cfg.order, Direction::kForward, cfg.discount);
  const auto backward = NgramModel::train(corpus, vocab, cfg.order, Direction::kBackward, cfg.discount);

  TrainStats stats;
  for (const auto& line : corpus) {
    const auto words = split_whitespace(line);
    if (words.empty()) continue;
    ++stats.sentences;
    stats.tokens += words.size();
  }
  stats.vocabulary = vocab->size();

  std::string vocab_text;
  for (TokenId i = 0; i < vocab->size(); ++i) vocab_text += vocab->surface(i) + "\n";
  const std::string fwd_bytes = forward.save();
  const std::string bwd_bytes = backward.save();

  const std::filesystem::path dir(cfg.lm_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_atomically(dir / kForwardModelFile, fwd_bytes);
  write_atomically(dir / kBackwardModelFile, bwd_bytes);
  write_atomically(dir / kVocabularyFile, vocab_text);
  return stats;
}

Models load_models(const RunConfig& cfg) {
  if (cfg.lm_dir.empty()) throw std::invalid_argument("--lm-dir is required");
  if (cfg.embeddings.empty()) throw std::invalid_argument("--embeddings is required");
  const std::filesystem::path dir(cfg.lm_dir);
  Models m;
  m.forward = std::make_shared<const NgramModel>(NgramModel::load_file(dir / kForwardModelFile));
  m.backward = std::make_shared<const NgramModel>(NgramModel::load_file(dir / kBackwardModelFile));
  if (m.forward->direction() != Direction::kForward ||
      m.backward->direction() != Direction::kBackward) {
    throw FormatError("language model files have the wrong directions");
  }
  if (!(m.forward->vocabulary() == m.backward->vocabulary())) {
    throw FormatError("forward and backward models disagree on the vocabulary");
  }
  m.embeddings = std::make_shared<const EmbeddingTable>(EmbeddingTable::load(cfg.embeddings));
  m.stopwords = std::make_shared<const StopwordList>(
      cfg.stopwords.empty() ? StopwordList::english() : StopwordList::load(cfg.stopwords));
  return m;
}

ParaphraseResult paraphrase_sentence(const Models& models, const RunConfig& cfg,
                                     const Sentence& source, std::uint64_t seed,
                                     const RunOptions& options) {
  Objective objective(source, *models.forward, *models.embeddings,
                      extract_keywords(source, *models.stopwords, cfg.max_keywords),
                      cfg.objective());
  CandidateGenerator generator(*models.forward, *models.backward, cfg.generator());
  Rng rng(seed);
  auto r = run(source, objective, generator, cfg.schedule(), rng, options);
  return ParaphraseResult{std::move(r.best), r.best_score, std::move(r.trace)};
}

std::vector<std::optional<ParaphraseResult>> paraphrase_lines(const Models& models,
                                                              const RunConfig& cfg,
                                                              std::span<const std::string> lines) {
  cfg.validate();
  std::vector<std::optional<ParaphraseResult>> out(lines.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      try {
        if (split_whitespace(lines[i]).empty()) continue;
        Sentence source = tokenize(lines[i], models.forward->vocabulary());
        out[i] = paraphrase_sentence(models, cfg, source, derive_seed(cfg.seed, i));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = lines.size();
      }
    }
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(lines.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<EvalCase> read_eval_tsv(std::istream& in) {
  const Vocabulary vocab;
  std::vector<EvalCase> cases;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_whitespace(line).empty()) continue;
    auto fields = split_tab_fields(line, lineno, vocab);
    if (fields.size() < 3) {
      throw FormatError(line_error(lineno, "expected source, candidate and at least one reference"));
    }
    EvalCase c{std::move(fields[0]), std::move(fields[1]), {}};
    c.references.assign(std::make_move_iterator(fields.begin() + 2),
                        std::make_move_iterator(fields.end()));
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<ReferenceCase> read_reference_tsv(std::istream& in) {
  const Vocabulary vocab;
  std::vector<ReferenceCase> cases;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_whitespace(line).empty()) continue;
    auto fields = split_tab_fields(line, lineno, vocab);
    if (fields.size() < 2) throw FormatError(line_error(lineno, "expected source and a reference"));
    ReferenceCase c{std::move(fields[0]), {}};
    c.references.assign(std::make_move_iterator(fields.begin() + 1),
                        std::make_move_iterator(fields.end()));
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<SweepRow> temperature_sweep(const Models& models, const RunConfig& cfg,
                                        std::span<const ReferenceCase> cases,
                                        std::span<const double> t_inits) {
  if (cases.empty()) throw std::invalid_argument("sweep needs at least one case");
  std::vector<std::string> lines;
  lines.reserve(cases.size());
  for (const auto& c : cases) lines.push_back(detokenize(c.source));

  std::vector<SweepRow> rows;
  for (double t0 : t_inits) {
    RunConfig row_cfg = cfg;
    row_cfg.t_init = t0;
    row_cfg.c_rate = cfg.iters ? t0 / static_cast<double>(cfg.iters) : 0.0;
    const auto results = paraphrase_lines(models, row_cfg, lines);

    std::vector<EvalCase> evals;
    SweepRow row{t0};
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto& r = *results[i];
      evals.push_back({cases[i].source, r.sentence, cases[i].references});
      row.mean_objective += r.score.value();
    }
    ReportConfig rc;
    rc.ibleu.alpha = cfg.alpha;
    const auto report = corpus_report(evals, rc);
    row.mean_ibleu = report.ibleu;
    row.mean_bleu = report.bleu;
    row.mean_objective /= static_cast<double>(cases.size());
    rows.push_back(row);
  }
  return rows;
}

std::string format_sweep(std::span<const SweepRow> rows) {
  std::string out = "t_init\tmean_ibleu\tmean_bleu\tmean_objective\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.4f\t%.4f\t%.4f\t%.6g\n", r.t_init, r.mean_ibleu,
                  r.mean_bleu, r.mean_objective);
    out += buf;
  }
  return out;
}

}  // namespace upsa
