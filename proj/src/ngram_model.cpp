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

#include "upsa/ngram_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "upsa/errors.hpp"

namespace upsa {
namespace {

constexpr char kMagic[8] = {'U', 'P', 'S', 'A', '-', 'L', 'M', '\0'};
constexpr TokenId kNoToken = 0xFFFFFFFFu;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  template <typename T>
  void le(T v) {
    static_assert(std::is_integral_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
    }
  }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  std::string& str() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename T>
  T le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::string_view take(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("truncated language model payload");
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void check_order(int order) {
  if (order < 1 || order > NgramModel::kMaxOrder) {
    throw std::invalid_argument("n-gram order must be in [1, 5]");
  }
}

}  // namespace

std::size_t NgramModel::ContextKeyHash::operator()(const ContextKey& k) const {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (TokenId t : k) {
    h ^= t;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

NgramModel::NgramModel(std::shared_ptr<const Vocabulary> vocab, int order,
                       Direction direction, std::vector<double> discounts,
                       CountTables tables)
    : vocab_(std::move(vocab)),
      order_(order),
      direction_(direction),
      discounts_(std::move(discounts)),
      tables_(std::move(tables)) {
  build_index();
}

NgramModel NgramModel::train(std::span<const std::string> corpus,
                             std::shared_ptr<const Vocabulary> vocab, int order,
                             Direction direction, double discount) {
  check_order(order);
  if (!(discount > 0.0 && discount < 1.0)) {
    throw std::invalid_argument("discount must be in (0, 1)");
  }
  const std::size_t n = static_cast<std::size_t>(order);
  CountTables tables(n);
  std::size_t tokens = 0;
  std::vector<TokenId> padded;
  for (const auto& line : corpus) {
    auto words = split_whitespace(line);
    if (words.empty()) continue;
    tokens += words.size();
    padded.assign(n - 1, kBosId);
    if (direction == Direction::kBackward) std::reverse(words.begin(), words.end());
    for (const auto& w : words) padded.push_back(vocab->id(to_lower(w)));
    padded.push_back(kEosId);
    for (std::size_t j = n - 1; j < padded.size(); ++j) {
      Ngram g(padded.begin() + static_cast<std::ptrdiff_t>(j + 1 - n),
              padded.begin() + static_cast<std::ptrdiff_t>(j + 1));
      ++tables[n - 1][std::move(g)];
    }
  }
  if (tokens == 0) throw EmptyCorpus("cannot train a language model on an empty corpus");

  // Continuation counts: every distinct (m+1)-gram adds one to its suffix.
  for (std::size_t m = n - 1; m >= 1; --m) {
    for (const auto& [g, c] : tables[m]) {
      ++tables[m - 1][Ngram(g.begin() + 1, g.end())];
    }
  }
  return NgramModel(std::move(vocab), order, direction,
                    std::vector<double>(n, discount), std::move(tables));
}

NgramModel::ContextKey NgramModel::make_key(std::span<const TokenId> context) {
  ContextKey key;
  key.fill(kNoToken);
  std::copy(context.begin(), context.end(), key.begin());
  return key;
}

void NgramModel::build_index() {
  const std::size_t v = vocab_->size();
  index_.assign(static_cast<std::size_t>(order_), {});
  token_counts_.assign(v, 0);
  for (int m = 1; m <= order_; ++m) {
    auto& idx = index_[static_cast<std::size_t>(m - 1)];
    // Tables are sorted, so followers arrive in ascending id per context.
    for (const auto& [g, c] : tables_[static_cast<std::size_t>(m - 1)]) {
      std::span<const TokenId> ctx(g.data(), g.size() - 1);
      auto& stats = idx[make_key(ctx)];
      stats.total += c;
      stats.distinct += 1;
      stats.followers.emplace_back(g.back(), c);
      if (m == order_) token_counts_[g.back()] += c;
    }
  }
}

const NgramModel::ContextStats* NgramModel::find(
    int m, std::span<const TokenId> context) const {
  const auto& idx = index_[static_cast<std::size_t>(m - 1)];
  auto it = idx.find(make_key(context));
  return it == idx.end() ? nullptr : &it->second;
}

double NgramModel::word_prob(std::span<const TokenId> context, TokenId w) const {
  const std::size_t usable = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  double p = 1.0 / static_cast<double>(vocab_->size());
  for (int m = 1; m <= static_cast<int>(usable) + 1; ++m) {
    const auto* stats = find(m, context.last(static_cast<std::size_t>(m - 1)));
    if (stats == nullptr) continue;
    const double d = discounts_[static_cast<std::size_t>(m - 1)];
    const double total = static_cast<double>(stats->total);
    const double gamma = d * static_cast<double>(stats->distinct) / total;
    double alpha = 0.0;
    auto it = std::lower_bound(
        stats->followers.begin(), stats->followers.end(), w,
        [](const auto& f, TokenId id) { return f.first < id; });
    if (it != stats->followers.end() && it->first == w) {
      alpha = std::max(static_cast<double>(it->second) - d, 0.0) / total;
    }
    p = gamma * p + alpha;
  }
  return p;
}

std::vector<double> NgramModel::distribution(std::span<const TokenId> context) const {
  const std::size_t usable = std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  std::vector<double> p(vocab_->size(), 1.0 / static_cast<double>(vocab_->size()));
  for (int m = 1; m <= static_cast<int>(usable) + 1; ++m) {
    const auto* stats = find(m, context.last(static_cast<std::size_t>(m - 1)));
    if (stats == nullptr) continue;
    const double d = discounts_[static_cast<std::size_t>(m - 1)];
    const double total = static_cast<double>(stats->total);
    const double gamma = d * static_cast<double>(stats->distinct) / total;
    // Same expression as word_prob so both paths agree bitwise.
    auto f = stats->followers.begin();
    for (TokenId w = 0; w < p.size(); ++w) {
      double alpha = 0.0;
      if (f != stats->followers.end() && f->first == w) {
        alpha = std::max(static_cast<double>(f->second) - d, 0.0) / total;
        ++f;
      }
      p[w] = gamma * p[w] + alpha;
    }
  }
  return p;
}

std::uint64_t NgramModel::token_count(TokenId w) const {
  return w < token_counts_.size() ? token_counts_[w] : 0;
}

std::string NgramModel::save() const {
  Writer out;
  out.bytes(kMagic, sizeof(kMagic));
  out.le<std::uint32_t>(kFormatVersion);
  out.le<std::uint32_t>(static_cast<std::uint32_t>(order_));
  out.le<std::uint8_t>(static_cast<std::uint8_t>(direction_));
  out.le<std::uint8_t>(0);
  out.le<std::uint16_t>(0);
  for (double d : discounts_) out.f64(d);
  const auto words = vocab_->words();
  out.le<std::uint32_t>(static_cast<std::uint32_t>(words.size()));
  for (const auto& w : words) {
    out.le<std::uint32_t>(static_cast<std::uint32_t>(w.size()));
    out.bytes(w.data(), w.size());
  }
  for (const auto& table : tables_) {
    out.le<std::uint64_t>(table.size());
    for (const auto& [g, c] : table) {
      for (TokenId t : g) out.le<std::uint32_t>(t);
      out.le<std::uint64_t>(c);
    }
  }
  out.le<std::uint64_t>(fnv1a(out.str()));
  return std::move(out.str());
}

NgramModel NgramModel::load(std::string_view bytes) {
  if (bytes.size() < sizeof(kMagic) + 8) throw FormatError("language model payload too short");
  const std::string_view body = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (tail.le<std::uint64_t>() != fnv1a(body)) {
    throw FormatError("language model checksum mismatch");
  }

  Reader in(body);
  if (std::memcmp(in.take(sizeof(kMagic)).data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a language model file");
  }
  const auto version = in.le<std::uint32_t>();
  if (version != kFormatVersion) {
    throw FormatError("unsupported language model version " + std::to_string(version));
  }
  const auto order = static_cast<int>(in.le<std::uint32_t>());
  if (order < 1 || order > kMaxOrder) throw FormatError("invalid n-gram order");
  const auto dir = in.le<std::uint8_t>();
  if (dir > 1) throw FormatError("invalid direction");
  if (in.le<std::uint8_t>() != 0 || in.le<std::uint16_t>() != 0) {
    throw FormatError("nonzero reserved bytes");
  }
  std::vector<double> discounts;
  for (int m = 0; m < order; ++m) {
    double d = in.f64();
    if (!(d > 0.0 && d < 1.0)) throw FormatError("invalid discount");
    discounts.push_back(d);
  }
  const auto nwords = in.le<std::uint32_t>();
  if (nwords > in.remaining() / 5) throw FormatError("invalid vocabulary size");
  std::vector<std::string> words;
  words.reserve(nwords);
  for (std::uint32_t i = 0; i < nwords; ++i) {
    auto len = in.le<std::uint32_t>();
    words.emplace_back(in.take(len));
  }
  auto vocab = std::make_shared<const Vocabulary>(std::move(words));
  const std::size_t vsize = vocab->size();

  CountTables tables(static_cast<std::size_t>(order));
  for (int m = 1; m <= order; ++m) {
    const auto entries = in.le<std::uint64_t>();
    const std::size_t entry_bytes = 4 * static_cast<std::size_t>(m) + 8;
    if (entries > in.remaining() / entry_bytes) throw FormatError("invalid table size");
    auto& table = tables[static_cast<std::size_t>(m - 1)];
    for (std::uint64_t e = 0; e < entries; ++e) {
      Ngram g(static_cast<std::size_t>(m));
      for (auto& t : g) {
        t = in.le<std::uint32_t>();
        if (t >= vsize) throw FormatError("token id out of range");
      }
      const auto c = in.le<std::uint64_t>();
      if (c == 0) throw FormatError("zero n-gram count");
      if (!table.empty() && !(table.rbegin()->first < g)) {
        throw FormatError("n-gram table not strictly ascending");
      }
      table.emplace_hint(table.end(), std::move(g), c);
    }
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes in language model payload");
  return NgramModel(std::move(vocab), order, static_cast<Direction>(dir),
                    std::move(discounts), std::move(tables));
}

NgramModel NgramModel::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open language model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load(buf.str());
}

void NgramModel::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write language model " + path.string());
  const auto bytes = save();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing language model " + path.string());
}

}  // namespace upsa
