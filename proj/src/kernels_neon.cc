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

// NEON kernels for arm64. Advanced SIMD with float64 lanes is mandatory on
// AArch64, so no runtime probe is needed there.

#include "piperate/kernels.h"

#ifdef PIPERATE_ARM64
#include <arm_neon.h>
#endif

namespace piperate::simd {

#ifdef PIPERATE_ARM64
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void dot4_neon(const double* a, const double* b0, const double* b1, const double* b2, const double* b3,
               std::size_t n, double* out) {
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  float64x2_t s2 = vdupq_n_f64(0.0);
  float64x2_t s3 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    s0 = vfmaq_f64(s0, va, vld1q_f64(b0 + i));
    s1 = vfmaq_f64(s1, va, vld1q_f64(b1 + i));
    s2 = vfmaq_f64(s2, va, vld1q_f64(b2 + i));
    s3 = vfmaq_f64(s3, va, vld1q_f64(b3 + i));
  }
  out[0] = vaddvq_f64(s0);
  out[1] = vaddvq_f64(s1);
  out[2] = vaddvq_f64(s2);
  out[3] = vaddvq_f64(s3);
  for (; i < n; ++i) {
    out[0] += a[i] * b0[i];
    out[1] += a[i] * b1[i];
    out[2] += a[i] * b2[i];
    out[3] += a[i] * b3[i];
  }
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kNeon{Isa::kNeon, dot_neon, dot4_neon, axpy_neon};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

#else

const KernelTable* neon_kernels() { return nullptr; }

#endif

}  // namespace piperate::simd
