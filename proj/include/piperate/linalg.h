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

#ifndef PIPERATE_LINALG_H_
#define PIPERATE_LINALG_H_

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace piperate {

// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double value = 0.0) : rows(r), cols(c), data(r * c, value) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
  std::span<double> row_span(std::size_t r) { return {row(r), cols}; }
  std::span<const double> row_span(std::size_t r) const { return {row(r), cols}; }
  std::size_t size() const { return data.size(); }
  void fill(double v) { std::fill(data.begin(), data.end(), v); }
  void resize(std::size_t r, std::size_t c) {
    rows = r;
    cols = c;
    data.assign(r * c, 0.0);
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

// All operands are contiguous row-major blocks. Dimensions: C is m x n.

// C (+)= A * B^T with A m x k, B n x k.
void gemm_abt(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k,
              bool accumulate);
// C += A * B with A m x k, B k x n.
void gemm_ab_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);
// C += A^T * B with A k x m, B k x n.
void gemm_atb_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t n, std::size_t k);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace piperate

#endif  // PIPERATE_LINALG_H_
