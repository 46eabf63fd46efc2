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

#include "upsa/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "upsa/errors.hpp"
#include "upsa/simd/kernels.hpp"

namespace upsa {
namespace {

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

bool EmbeddingTable::add(std::string surface, std::span<const double> vector) {
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_ || dim_ == 0) {
    throw DimensionError("embedding for '" + surface + "' has dimension " +
                         std::to_string(vector.size()) + ", expected " +
                         std::to_string(dim_));
  }
  for (double x : vector) {
    if (!std::isfinite(x)) throw FormatError("non-finite embedding component for '" + surface + "'");
  }
  if (rows_.contains(surface)) return false;
  const std::size_t row = rows_.size();
  rows_.emplace(std::move(surface), row);
  data_.insert(data_.end(), vector.begin(), vector.end());
  norms_.push_back(std::sqrt(simd::dot(vector, vector)));
  return true;
}

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    std::size_t a = 0, b = 0;
    if (lineno == 1 && fields.size() == 2 && parse_size(fields[0], a) &&
        parse_size(fields[1], b)) {
      continue;  // `count dim` header
    }
    values.clear();
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = 0.0;
      if (!parse_double(fields[i], x)) {
        throw FormatError("line " + std::to_string(lineno) + ": cannot parse '" + fields[i] + "'");
      }
      values.push_back(x);
    }
    if (values.empty()) {
      throw FormatError("line " + std::to_string(lineno) + ": row has no components");
    }
    try {
      table.add(fields[0], values);
    } catch (const DimensionError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings " + path.string());
  return parse(in);
}

bool EmbeddingTable::contains(std::string_view surface) const {
  return rows_.find(std::string(surface)) != rows_.end();
}

std::optional<std::span<const double>> EmbeddingTable::find(std::string_view surface) const {
  auto it = rows_.find(std::string(surface));
  if (it == rows_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

double EmbeddingTable::norm(std::string_view surface) const {
  auto it = rows_.find(std::string(surface));
  return it == rows_.end() ? 0.0 : norms_[it->second];
}

double cosine_from(double dot, double norm_u, double norm_v) {
  if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
  return std::clamp(dot / (norm_u * norm_v), -1.0, 1.0);
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine of vectors with dimensions " + std::to_string(u.size()) +
                         " and " + std::to_string(v.size()));
  }
  return cosine_from(simd::dot(u, v), std::sqrt(simd::dot(u, u)), std::sqrt(simd::dot(v, v)));
}

std::vector<double> sentence_vector(const Sentence& s, const EmbeddingTable& table) {
  std::map<std::string_view, std::size_t> counts;
  for (const auto& t : s) {
    if (table.contains(t.surface)) ++counts[t.surface];
  }
  std::vector<double> acc(table.dimension(), 0.0);
  std::size_t total = 0;
  for (const auto& [surface, c] : counts) {
    simd::axpy(static_cast<double>(c), *table.find(surface), acc);
    total += c;
  }
  if (total > 0) {
    // Division, not multiplication by 1/total, keeps the mean correctly rounded.
    for (auto& x : acc) x /= static_cast<double>(total);
  }
  return acc;
}

}  // namespace upsa
