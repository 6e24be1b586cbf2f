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

// Reference kernels. Plain sequential loops; every SIMD variant is tested
// against these.

#include "piperate/kernels.h"

namespace piperate::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void dot4_scalar(const double* a, const double* b0, const double* b1, const double* b2, const double* b3,
                 std::size_t n, double* out) {
  out[0] = dot_scalar(a, b0, n);
  out[1] = dot_scalar(a, b1, n);
  out[2] = dot_scalar(a, b2, n);
  out[3] = dot_scalar(a, b3, n);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalar{Isa::kScalar, dot_scalar, dot4_scalar, axpy_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace piperate::simd
