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
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "upsa/text.hpp"

namespace upsa {

// Word vectors in the common text format: one `surface v1 ... vd` row per
// line, optionally preceded by a `count dim` header line.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dim_(dimension) {}

  // Throws FormatError on inconsistent dimensions, unparseable or non-finite
  // numbers. Duplicate surfaces keep their first row.
  static EmbeddingTable load(const std::filesystem::path& path);
  static EmbeddingTable parse(std::istream& in);

  // Returns false (and leaves the table unchanged) for a duplicate surface.
  // Throws DimensionError on a size mismatch and FormatError on NaN/Inf.
  bool add(std::string surface, std::span<const double> vector);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  bool contains(std::string_view surface) const;
  // Empty optional when the surface has no vector.
  std::optional<std::span<const double>> find(std::string_view surface) const;
  // Euclidean norm of the surface's row; 0 when absent.
  double norm(std::string_view surface) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> rows_;
  std::vector<double> data_;
  std::vector<double> norms_;
};

// Cosine similarity, 0 when either vector is zero. Throws DimensionError.
double cosine(std::span<const double> u, std::span<const double> v);

// Cosine from a precomputed dot product and norms.
double cosine_from(double dot, double norm_u, double norm_v);

// Mean of the vectors of the sentence's tokens that have one; the zero vector
// when none do. Accumulation runs over distinct surfaces in lexicographic
// order weighted by multiplicity, so the result is exactly invariant to token
// order and to repeating the sentence.
std::vector<double> sentence_vector(const Sentence& s, const EmbeddingTable& table);

}  // namespace upsa
