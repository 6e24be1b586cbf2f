// Copyright 2026 The piperate Authors.
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

// Double-precision inner-loop kernels with a portable scalar reference and
// SIMD variants. The variant is picked once at startup from the CPU's
// capabilities; PIPERATE_ISA=scalar|avx2|neon overrides the choice.

#ifndef PIPERATE_KERNELS_H_
#define PIPERATE_KERNELS_H_

#include <cstddef>
#include <string_view>

#if defined(__x86_64__) || defined(_M_X64)
#define PIPERATE_X86 1
#endif
#if defined(__aarch64__) || defined(_M_ARM64)
#define PIPERATE_ARM64 1
#endif

namespace piperate::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[j] = sum_i a[i] * bj[i] for the four rows b0..b3.
  void (*dot4)(const double* a, const double* b0, const double* b1, const double* b2, const double* b3,
               std::size_t n, double* out);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant is not compiled for this target.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool cpu_supports(Isa isa);
Isa best_available();

// The table used by the linear algebra layer.
const KernelTable& active();
// Throws piperate::Error if the ISA is unavailable here.
void select(Isa isa);

}  // namespace piperate::simd

#endif  // PIPERATE_KERNELS_H_
