#pragma once

#include <cstddef>
#include <vector>

#include "evdkit/dense.hpp"

namespace evdkit {

// One batch of equally-shaped GEMM blocks: for each entry,
// C[c] += alpha * A[a] * B[b]^T where A blocks are rows x k, B blocks are
// cols x k, C blocks are rows x cols, and a/b/c are element offsets into the
// caller's buffers.  C blocks must be pairwise disjoint within a batch, which
// is what makes concurrent execution safe.
struct GemmBatchDescriptor {
  int rows = 0;
  int cols = 0;
  int k = 0;
  int lda = 0;
  int ldb = 0;
  int ldc = 0;
  struct Offsets {
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t c = 0;
  };
  std::vector<Offsets> blocks;
};

void gemm_batched(const GemmBatchDescriptor& d, double alpha, const double* a,
                  const double* b, double* c);

// Blocking plan for the recursive rank-2k update: one batch of diagonal-block
// updates, then doubling rounds of off-diagonal GEMM batches (block side
// nb, 2nb, 4nb, ...).  Every lower-triangle entry of C is covered exactly
// once.  Ragged sizes clamp the last row-chunk of a round, which then lands
// in its own descriptor so each descriptor stays uniform.
struct Syr2kPlan {
  int n = 0;
  int nb = 0;
  struct DiagBlock {
    int off = 0;   // first row/column of the block
    int size = 0;  // block order
  };
  std::vector<DiagBlock> diag;
  std::vector<std::vector<GemmBatchDescriptor>> rounds;
};

Syr2kPlan plan_syr2k(int n, int nb, int lda, int ldb, int ldc);

// C := beta*C + alpha*(A B^T + B A^T), lower triangle only.
// A and B are n x k; C is n x n with leading dimension ldc.
void syr2k_naive(int n, int k, double alpha, const double* a, int lda,
                 const double* b, int ldb, double beta, double* c, int ldc);

// Same result computed through the blocking plan above; off-diagonal rounds
// run as two batched GEMM passes (A B^T, then B A^T).
void syr2k_recursive(int n, int k, double alpha, const double* a, int lda,
                     const double* b, int ldb, double beta, double* c, int ldc,
                     int nb);

}  // namespace evdkit
