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
#include <string_view>

// Dense double-precision kernels behind the embedding arithmetic. Each
// instruction-set variant lives in its own translation unit; the active one
// is picked once at first use from CPU capabilities, overridable through the
// UPSA_SIMD environment variable ("scalar" or "avx2").
namespace upsa::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  // Sum of x[i] * y[i]. Reduction order is variant specific.
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]. Bitwise identical across variants.
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a. Bitwise identical across variants.
  void (*scale)(double a, double* x, std::size_t n);
};

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

// Throws std::invalid_argument when `isa` is not supported on this CPU.
const KernelTable& kernels(Isa isa);
const KernelTable& active_kernels();
Isa active_isa();

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);

namespace detail {
const KernelTable& scalar_table();
#if defined(UPSA_HAVE_AVX2_KERNELS)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace upsa::simd
