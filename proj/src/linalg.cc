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

#include "piperate/linalg.h"

#include <cassert>

#include "piperate/kernels.h"

namespace piperate {
namespace {

// Row-block sizes chosen so the reused operand block stays in L2.
constexpr std::size_t kAbtRowBlock = 32;
constexpr std::size_t kAbRowBlock = 16;
constexpr std::size_t kAtbRowBlock = 32;

}  // namespace

void gemm_abt(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k,
              bool accumulate) {
  const auto& kern = simd::active();
  for (std::size_t i0 = 0; i0 < m; i0 += kAbtRowBlock) {
    const std::size_t i1 = std::min(m, i0 + kAbtRowBlock);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* b0 = b + j * k;
      for (std::size_t i = i0; i < i1; ++i) {
        double out[4];
        kern.dot4(a + i * k, b0, b0 + k, b0 + 2 * k, b0 + 3 * k, k, out);
        double* ci = c + i * n + j;
        if (accumulate) {
          ci[0] += out[0];
          ci[1] += out[1];
          ci[2] += out[2];
          ci[3] += out[3];
        } else {
          ci[0] = out[0];
          ci[1] = out[1];
          ci[2] = out[2];
          ci[3] = out[3];
        }
      }
    }
    for (; j < n; ++j) {
      for (std::size_t i = i0; i < i1; ++i) {
        const double v = kern.dot(a + i * k, b + j * k, k);
        c[i * n + j] = accumulate ? c[i * n + j] + v : v;
      }
    }
  }
}

void gemm_ab_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k) {
  const auto& kern = simd::active();
  for (std::size_t i0 = 0; i0 < m; i0 += kAbRowBlock) {
    const std::size_t i1 = std::min(m, i0 + kAbRowBlock);
    for (std::size_t p = 0; p < k; ++p) {
      const double* bp = b + p * n;
      for (std::size_t i = i0; i < i1; ++i) {
        const double alpha = a[i * k + p];
        if (alpha != 0.0) kern.axpy(alpha, bp, c + i * n, n);
      }
    }
  }
}

void gemm_atb_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k) {
  const auto& kern = simd::active();
  for (std::size_t i0 = 0; i0 < m; i0 += kAtbRowBlock) {
    const std::size_t i1 = std::min(m, i0 + kAtbRowBlock);
    for (std::size_t r = 0; r < k; ++r) {
      const double* ar = a + r * m;
      const double* br = b + r * n;
      for (std::size_t i = i0; i < i1; ++i) {
        const double alpha = ar[i];
        if (alpha != 0.0) kern.axpy(alpha, br, c + i * n, n);
      }
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return simd::active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  simd::active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace piperate
