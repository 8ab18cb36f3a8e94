//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/kernels/kernels.hpp"

#include <bit>
#include <cmath>

namespace synthphore::kernels {

namespace {

template <class T>
void gemm_row(const T* a, const T* b, T* c, std::size_t i, std::size_t n, std::size_t k) {
  T* ci = c + i * n;
  for (std::size_t j = 0; j < n; ++j) ci[j] = T(0);
  for (std::size_t p = 0; p < k; ++p) {
    const T aip = a[i * k + p];
    const T* bp = b + p * n;
    for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
  }
}

template <class T>
void sqdist_row(const T* x, std::size_t i, std::size_t n, std::size_t dim, T* d) {
  for (std::size_t j = 0; j < n; ++j) {
    T s = T(0);
    for (std::size_t q = 0; q < dim; ++q) {
      const T diff = x[i * dim + q] - x[j * dim + q];
      s += diff * diff;
    }
    d[i * n + j] = s;
  }
}

template <class T>
T dot(const T* a, const T* b, std::size_t dim) {
  T s = T(0);
  for (std::size_t q = 0; q < dim; ++q) s += a[q] * b[q];
  return s;
}

double tanimoto_one(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t w = 0; w < words; ++w) {
    inter += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
    uni += static_cast<std::size_t>(std::popcount(a[w] | b[w]));
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

template <class T>
void gemm(const T* a, const T* b, T* c, std::size_t m, std::size_t n, std::size_t k, Exec exec) {
  const auto rows = static_cast<long>(m);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) gemm_row(a, b, c, static_cast<std::size_t>(i), n, k);
  } else {
    for (long i = 0; i < rows; ++i) gemm_row(a, b, c, static_cast<std::size_t>(i), n, k);
  }
}

template <class T>
void pairwise_sqdist(const T* x, std::size_t n, std::size_t dim, T* d, Exec exec) {
  const auto rows = static_cast<long>(n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) sqdist_row(x, static_cast<std::size_t>(i), n, dim, d);
  } else {
    for (long i = 0; i < rows; ++i) sqdist_row(x, static_cast<std::size_t>(i), n, dim, d);
  }
}

template <class T>
void cosine_scan(const T* query, const T* rows, std::size_t n, std::size_t dim, T* out, Exec exec) {
  const T qn = std::sqrt(dot(query, query, dim));
  const auto count = static_cast<long>(n);
  auto one = [&](long r) {
    const T* row = rows + static_cast<std::size_t>(r) * dim;
    const T denom = qn * std::sqrt(dot(row, row, dim));
    out[r] = denom > T(0) ? dot(query, row, dim) / denom : T(0);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long r = 0; r < count; ++r) one(r);
  } else {
    for (long r = 0; r < count; ++r) one(r);
  }
}

void tanimoto_batch(const std::uint64_t* query, const std::uint64_t* fps, std::size_t n, std::size_t words,
                    double* out, Exec exec) {
  const auto count = static_cast<long>(n);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long r = 0; r < count; ++r) out[r] = tanimoto_one(query, fps + static_cast<std::size_t>(r) * words, words);
  } else {
    for (long r = 0; r < count; ++r) out[r] = tanimoto_one(query, fps + static_cast<std::size_t>(r) * words, words);
  }
}

template void gemm<float>(const float*, const float*, float*, std::size_t, std::size_t, std::size_t, Exec);
template void gemm<double>(const double*, const double*, double*, std::size_t, std::size_t, std::size_t, Exec);
template void pairwise_sqdist<float>(const float*, std::size_t, std::size_t, float*, Exec);
template void pairwise_sqdist<double>(const double*, std::size_t, std::size_t, double*, Exec);
template void cosine_scan<float>(const float*, const float*, std::size_t, std::size_t, float*, Exec);
template void cosine_scan<double>(const double*, const double*, std::size_t, std::size_t, double*, Exec);

}  // namespace synthphore::kernels
