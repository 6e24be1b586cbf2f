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

// AVX2 + FMA kernels. Built with per-function target attributes so the rest
// of the library keeps the baseline ISA; only called after a CPUID check.

#include "piperate/kernels.h"

#if defined(PIPERATE_X86) && (defined(__GNUC__) || defined(__clang__))
#define PIPERATE_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace piperate::simd {

#ifdef PIPERATE_HAVE_AVX2_KERNELS
namespace {

#define PIPERATE_TARGET_AVX2 __attribute__((target("avx2,fma")))

PIPERATE_TARGET_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

PIPERATE_TARGET_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

PIPERATE_TARGET_AVX2 void dot4_avx2(const double* a, const double* b0, const double* b1, const double* b2,
                                    const double* b3, std::size_t n, double* out) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    s0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b0 + i), s0);
    s1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b1 + i), s1);
    s2 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b2 + i), s2);
    s3 = _mm256_fmadd_pd(va, _mm256_loadu_pd(b3 + i), s3);
  }
  // Transpose-reduce the four accumulators into one vector of sums.
  const __m256d t01 = _mm256_hadd_pd(s0, s1);
  const __m256d t23 = _mm256_hadd_pd(s2, s3);
  const __m256d lo = _mm256_permute2f128_pd(t01, t23, 0x20);
  const __m256d hi = _mm256_permute2f128_pd(t01, t23, 0x31);
  _mm256_storeu_pd(out, _mm256_add_pd(lo, hi));
  for (; i < n; ++i) {
    out[0] += a[i] * b0[i];
    out[1] += a[i] * b1[i];
    out[2] += a[i] * b2[i];
    out[3] += a[i] * b3[i];
  }
}

PIPERATE_TARGET_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kAvx2{Isa::kAvx2, dot_avx2, dot4_avx2, axpy_avx2};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace piperate::simd
