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

#include "piperate/kernels.h"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "piperate/error.h"
#include "piperate/linalg.h"
#include "piperate/random.h"

namespace piperate {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

long double naive_dot(const double* a, const double* b, std::size_t n) {
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(a[i]) * b[i];
  return s;
}

// Sum of |a_i b_i|, the scale of the rounding error in a dot product.
double magnitude(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] * b[i]);
  return s;
}

std::vector<simd::Isa> available() {
  std::vector<simd::Isa> out;
  for (simd::Isa isa : {simd::Isa::kScalar, simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (simd::cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

// Restores the process-wide kernel choice.
struct IsaGuard {
  simd::Isa saved = simd::active().isa;
  ~IsaGuard() { simd::select(saved); }
};

TEST_CASE("scalar kernels are always available") {
  CHECK(simd::cpu_supports(simd::Isa::kScalar));
  CHECK(simd::scalar_kernels().isa == simd::Isa::kScalar);
  CHECK(simd::cpu_supports(simd::best_available()));
  MESSAGE("active kernels: " << simd::isa_name(simd::active().isa));
}

TEST_CASE("every kernel table agrees with a long double reference") {
  Rng rng(1);
  for (simd::Isa isa : available()) {
    const simd::KernelTable* k = isa == simd::Isa::kScalar ? &simd::scalar_kernels()
                                 : isa == simd::Isa::kAvx2 ? simd::avx2_kernels()
                                                           : simd::neon_kernels();
    REQUIRE(k != nullptr);
    for (std::size_t n = 0; n < 70; ++n) {
      // Offset by one element to exercise unaligned loads.
      auto a = random_vector(rng, n + 1);
      auto b0 = random_vector(rng, n + 1);
      auto b1 = random_vector(rng, n + 1);
      auto b2 = random_vector(rng, n + 1);
      auto b3 = random_vector(rng, n + 1);
      const double* pa = a.data() + 1;
      const double* rows[4] = {b0.data() + 1, b1.data() + 1, b2.data() + 1, b3.data() + 1};
      const double tol = 1e-14 * (1.0 + magnitude(pa, rows[0], n)) * 4;

      CHECK(std::abs(k->dot(pa, rows[0], n) - static_cast<double>(naive_dot(pa, rows[0], n))) <= tol);
      double out[4];
      k->dot4(pa, rows[0], rows[1], rows[2], rows[3], n, out);
      for (int j = 0; j < 4; ++j) {
        const double t = 1e-14 * (1.0 + magnitude(pa, rows[j], n)) * 4;
        CHECK(std::abs(out[j] - static_cast<double>(naive_dot(pa, rows[j], n))) <= t);
      }

      std::vector<double> y = random_vector(rng, n + 1), y_ref = y;
      k->axpy(0.75, pa, y.data() + 1, n);
      for (std::size_t i = 0; i < n; ++i) y_ref[i + 1] += 0.75 * pa[i];
      // FMA variants round once instead of twice.
      for (std::size_t i = 0; i <= n; ++i) CHECK(std::abs(y[i] - y_ref[i]) <= 1e-15 * (4.0 + std::abs(y_ref[i])));
    }
  }
}

TEST_CASE("selecting an unavailable ISA throws") {
  for (simd::Isa isa : {simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (!simd::cpu_supports(isa)) CHECK_THROWS_AS(simd::select(isa), Error);
  }
}

void naive_gemm_abt(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& c,
                    std::size_t m, std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += static_cast<double>(naive_dot(&a[i * k], &b[j * k], k));
}

TEST_CASE("gemm variants match naive loops under every ISA") {
  IsaGuard guard;
  Rng rng(2);
  for (simd::Isa isa : available()) {
    simd::select(isa);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t m = 1 + rng.below(40), n = 1 + rng.below(40), k = 1 + rng.below(40);
      const auto a = random_vector(rng, m * k);
      const auto bt = random_vector(rng, n * k);  // n x k
      const auto b = random_vector(rng, k * n);   // k x n
      const auto init = random_vector(rng, m * n);
      const double tol = 1e-12 * static_cast<double>(k);

      // C = A B^T, then C += A B^T.
      std::vector<double> c(m * n), ref(m * n, 0.0);
      gemm_abt(a.data(), bt.data(), c.data(), m, n, k, false);
      naive_gemm_abt(a, bt, ref, m, n, k);
      for (std::size_t i = 0; i < m * n; ++i) CHECK(std::abs(c[i] - ref[i]) <= tol);
      gemm_abt(a.data(), bt.data(), c.data(), m, n, k, true);
      for (std::size_t i = 0; i < m * n; ++i) CHECK(std::abs(c[i] - 2 * ref[i]) <= 2 * tol);

      // C += A B with A m x k, B k x n.
      c = init;
      gemm_ab_acc(a.data(), b.data(), c.data(), m, n, k);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          long double s = init[i * n + j];
          for (std::size_t p = 0; p < k; ++p) s += static_cast<long double>(a[i * k + p]) * b[p * n + j];
          CHECK(std::abs(c[i * n + j] - static_cast<double>(s)) <= tol);
        }
      }

      // C += A^T B with A k x m, B k x n.
      const auto at = random_vector(rng, k * m);
      c = init;
      gemm_atb_acc(at.data(), b.data(), c.data(), m, n, k);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          long double s = init[i * n + j];
          for (std::size_t p = 0; p < k; ++p) s += static_cast<long double>(at[p * m + i]) * b[p * n + j];
          CHECK(std::abs(c[i * n + j] - static_cast<double>(s)) <= tol);
        }
      }
    }
  }
}

TEST_CASE("span helpers") {
  std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  CHECK(dot(a, b) == 32.0);
  axpy(2.0, a, b);
  CHECK(b == std::vector<double>{6, 9, 12});
}

}  // namespace
}  // namespace piperate
