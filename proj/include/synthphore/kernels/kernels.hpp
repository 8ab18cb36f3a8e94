//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>

namespace synthphore::kernels {

// Parallel variants split work by output row and keep the serial per-row
// arithmetic order, so both produce bit-identical results.
enum class Exec { Serial, Parallel };

// C (m x n) = A (m x k) * B (k x n), all row-major.
template <class T>
void gemm(const T* a, const T* b, T* c, std::size_t m, std::size_t n, std::size_t k, Exec exec);

// D (n x n) with D[i][j] = |x_i - x_j|^2 for row-major points x (n x dim).
template <class T>
void pairwise_sqdist(const T* x, std::size_t n, std::size_t dim, T* d, Exec exec);

// out[r] = cos(query, rows[r]); rows with zero norm (or a zero query) give 0.
template <class T>
void cosine_scan(const T* query, const T* rows, std::size_t n, std::size_t dim, T* out, Exec exec);

// out[r] = Tanimoto(query, fps[r]) over packed 64-bit words; two empty sets give 1.
void tanimoto_batch(const std::uint64_t* query, const std::uint64_t* fps, std::size_t n, std::size_t words,
                    double* out, Exec exec);

}  // namespace synthphore::kernels
